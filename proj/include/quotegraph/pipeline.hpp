#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quotegraph/anchor.hpp"
#include "quotegraph/corpus.hpp"
#include "quotegraph/highlight.hpp"
#include "quotegraph/records.hpp"
#include "quotegraph/verbatim.hpp"

namespace quotegraph {

struct PipelineConfig {
  int window = 100;
  int min_quote_words = 5;
  int max_quote_words = 100;
  MatchParams match;
  std::int64_t word_limit = 512;
  int top_k = 5;
  int workers = 1;
  std::uint64_t seed = 0;
  bool emit_all = false;
  std::size_t exact_limit = 5000;
  std::size_t pivots = 0;  // 0: min(n, 1000) when exact mode is out of reach
  std::string input;
  std::string output_dir = ".";

  void validate() const;
  AnchorConfig anchor_config() const;
};

// `key = value` lines; '#' starts a comment. Unknown keys are usage errors.
PipelineConfig parse_config_text(const std::string& text, PipelineConfig base = {});
PipelineConfig load_config_file(const std::string& path, PipelineConfig base = {});
std::string to_config_text(const PipelineConfig& cfg);

struct PipelineCounters {
  std::int64_t opinions = 0;
  std::int64_t citing_opinions = 0;
  std::int64_t mentions = 0;
  std::int64_t snippets = 0;
  CandidateCounters candidates;
  std::int64_t qualified = 0;
  std::int64_t rejected = 0;
  std::int64_t too_short_for_matching = 0;
  std::int64_t edge_records = 0;
  std::int64_t multi_sentence_quotes = 0;
  std::int64_t highlight_records = 0;
  std::int64_t highlighted_sentences = 0;
  std::int64_t cited_opinions = 0;
};

struct PipelineOutput {
  std::vector<VerbatimEdge> edges;     // sorted by citing id, mention order
  std::vector<VerbatimEdge> rejects;   // same order, score -1
  std::vector<SentenceRecord> highlights;
  DropReport drops;
  PipelineCounters counters;
};

// Snippet -> candidates -> qualification -> sentence alignment for every
// citation of every opinion in `corpus` (sorted by id).
PipelineOutput run_pipeline(const std::vector<Opinion>& corpus, const PipelineConfig& cfg,
                            DropReport drops = {});

// Reads cfg.input, runs the pipeline and returns the result.
PipelineOutput run_pipeline_on_file(const PipelineConfig& cfg);

records::Json summary_json(const PipelineOutput& out, const PipelineConfig& cfg);

// Writes the three record files and drop_report.json into cfg.output_dir.
void write_pipeline_outputs(const PipelineOutput& out, const PipelineConfig& cfg);

}  // namespace quotegraph
