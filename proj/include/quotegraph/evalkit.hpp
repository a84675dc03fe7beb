#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "quotegraph/corpus.hpp"
#include "quotegraph/highlight.hpp"

namespace quotegraph {

// A full ranking of one opinion's sentences, best first.
struct RankedSentences {
  OpinionId opinion_id = 0;
  std::vector<std::int64_t> order;
  std::vector<double> scores;  // parallel to order, non-increasing

  bool operator==(const RankedSentences&) const = default;
};

struct RankingMetrics {
  double p_at_1 = 0.0;
  double p_at_r = 0.0;
  double average_precision = 0.0;
  double reciprocal_rank = 0.0;
};

// Throws NoRelevant when `relevant` is empty.
RankingMetrics ranking_metrics(const std::vector<std::int64_t>& order,
                               const std::set<std::int64_t>& relevant);

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

RougeScore rouge_n(const std::vector<std::string>& hyp, const std::vector<std::string>& ref,
                   int n);
RougeScore rouge_l(const std::vector<std::string>& hyp, const std::vector<std::string>& ref);

// Lowercased, punctuation-trimmed tokens as used by ROUGE and TextRank.
std::vector<std::string> metric_tokens(std::string_view text);

struct TextRankConfig {
  double damping = 0.85;
  double tolerance = 1e-6;
  int max_iterations = 200;
};

// Ranks a list of sentences; ids are positions in the list.
RankedSentences textrank_sentences(const std::vector<std::string>& sentences,
                                   const TextRankConfig& cfg = {});
RankedSentences textrank_rank(const Opinion& opinion, const TextRankConfig& cfg = {});
RankedSentences position_rank(const Opinion& opinion);
RankedSentences random_rank(const Opinion& opinion, std::uint64_t seed);

// Builds a ranking from per-sentence scores: descending score, ties by id.
RankedSentences rank_by_scores(OpinionId id, const std::vector<double>& scores);

// Number of leading sentences that end within the first `word_limit` words.
std::size_t sentences_within(const std::vector<SentenceRecord>& sentences,
                             std::int64_t word_limit);
std::size_t sentences_within(const Opinion& opinion, std::int64_t word_limit);

// Opinions with at least one highlight sentence ending within the first
// `word_limit` words. Records are grouped by opinion and sorted by sentence.
std::set<OpinionId> filter_test_set(
    const std::map<OpinionId, std::vector<SentenceRecord>>& records, std::int64_t word_limit);

struct EvalOptions {
  int top_k = 5;
  // When set, both ranking and gold are cut to the sentences ending within
  // this many words.
  std::optional<std::int64_t> truncate_words;
};

struct OpinionEval {
  OpinionId opinion_id = 0;
  RankingMetrics ranking;
  RougeScore rouge1;
  RougeScore rouge2;
  RougeScore rougeL;
  std::size_t relevant = 0;
  std::size_t sentences = 0;
};

struct EvalReport {
  std::vector<OpinionEval> per_opinion;  // ascending opinion id
  RankingMetrics mean_ranking;
  RougeScore mean_rouge1;
  RougeScore mean_rouge2;
  RougeScore mean_rougeL;
  std::size_t opinions = 0;
  std::size_t skipped_no_relevant = 0;
  EvalOptions options;
};

// Throws MissingGold when a ranked opinion has no gold records.
EvalReport evaluate(const std::vector<RankedSentences>& rankings,
                    const std::map<OpinionId, std::vector<SentenceRecord>>& gold,
                    const EvalOptions& options = {});

// Groups records by opinion id with sentences in ascending order.
std::map<OpinionId, std::vector<SentenceRecord>> group_by_opinion(
    std::vector<SentenceRecord> records);

}  // namespace quotegraph
