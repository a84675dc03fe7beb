#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quotegraph/corpus.hpp"
#include "quotegraph/verbatim.hpp"

namespace quotegraph {

// One row of verbcl_graph.jsonl (or rejects.jsonl, where score is -1 and
// sentence_id is -1).
struct VerbatimEdge {
  OpinionId citing_opinion_id = 0;
  OpinionId cited_opinion_id = 0;
  std::int64_t sentence_id = 0;
  std::string verbatim;
  std::string snippet;
  double score = 0.0;

  bool operator==(const VerbatimEdge&) const = default;
};

// One row of verbcl_highlights.jsonl.
struct SentenceRecord {
  OpinionId opinion_id = 0;
  std::int64_t sentence_id = 0;
  std::string raw_text;
  bool highlight = false;
  std::int64_t count_citations = 0;

  bool operator==(const SentenceRecord&) const = default;
};

// Sentences of `cited` whose words intersect the matched range, ascending.
std::vector<std::size_t> align_sentences(const MatchResult& match, const Opinion& cited);

struct HighlightCounters {
  std::int64_t missing_cited_opinion = 0;
  std::int64_t invalid_sentence_id = 0;
};

// One record per sentence of every cited opinion (of every opinion when
// `emit_all`), sorted by (opinion_id, sentence_id). `corpus` must be sorted
// by id.
std::vector<SentenceRecord> build_highlights(const std::vector<VerbatimEdge>& edges,
                                             const std::vector<Opinion>& corpus,
                                             bool emit_all = false,
                                             HighlightCounters* counters = nullptr);

}  // namespace quotegraph
