#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quotegraph/corpus.hpp"

namespace quotegraph {

// Text window around one citation mention.
struct Snippet {
  OpinionId citing_opinion_id = 0;
  OpinionId cited_opinion_id = 0;
  std::size_t mention_index = 0;
  std::string text;
  int window_words = 0;
};

struct VerbatimCandidate {
  std::size_t mention_index = 0;
  // Byte span inside the owning snippet's text.
  Span span;
  std::string quoted_text;
  int word_count = 0;
};

// A pair of quote characters. With `flanked`, the opener must follow a
// non-letter and the closer must precede one, so apostrophes never pair.
struct QuotePair {
  char32_t open;
  char32_t close;
  bool flanked = false;
};

struct AnchorConfig {
  int window_words = 100;
  int min_quote_words = 5;
  int max_quote_words = 100;
  std::vector<QuotePair> delimiters = default_delimiters();

  static std::vector<QuotePair> default_delimiters();
};

struct CandidateCounters {
  std::int64_t candidates = 0;
  std::int64_t too_short = 0;
  std::int64_t too_long = 0;
  std::int64_t unbalanced_quotes = 0;

  void merge(const CandidateCounters& other) {
    candidates += other.candidates;
    too_short += other.too_short;
    too_long += other.too_long;
    unbalanced_quotes += other.unbalanced_quotes;
  }
};

// Up to `n` words before and `n` words after the mention, joined by single
// spaces, with the citation marker words left out.
Snippet extract_snippet(const Opinion& opinion, std::size_t mention_index, int n);

std::vector<VerbatimCandidate> extract_candidates(const Snippet& snippet,
                                                  const AnchorConfig& cfg,
                                                  CandidateCounters* counters = nullptr);

}  // namespace quotegraph
