#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "quotegraph/corpus.hpp"

namespace quotegraph {

// Limits for aligning a quotation against the text it claims to come from.
struct MatchParams {
  // Longest run of unmatched cited tokens allowed between two consecutive
  // matched tokens. Runs that line up with an ellipsis in the quotation are
  // not limited.
  int max_gap_run = 8;
  // Largest fraction of quotation tokens that may stay unmatched.
  double max_skip_ratio = 0.15;
  // Tokens at least this many code points long match with one edit.
  int fuzzy_min_length = 5;
  // Quotations with fewer normalized tokens are rejected as too short.
  int min_tokens = 5;

  // Throws Error(kUsage) when a field is out of range.
  void validate() const;
};

enum class MatchStatus { kMatched, kNotMatched, kTooShort };

struct MatchResult {
  MatchStatus status = MatchStatus::kNotMatched;
  bool matched = false;
  // In [0, 1] when matched, -1 otherwise.
  double score = -1.0;
  // Half-open range of cited word indices spanned by the alignment.
  std::pair<std::size_t, std::size_t> cited_token_range{0, 0};
  // (quotation token index, cited word index), increasing in both.
  std::vector<std::pair<std::size_t, std::size_t>> matched_pairs;
  int candidate_tokens = 0;
  int matched_tokens = 0;
  int gap_tokens = 0;
};

// Normalized quotation tokens. elided_before[i] is set when an ellipsis sits
// between token i-1 and token i.
struct QuoteTokens {
  std::vector<std::string> tokens;
  std::vector<bool> elided_before;
};

QuoteTokens quote_tokens(std::string_view quote);

// Token equality used by the matcher: identical, or within one edit when the
// longer token has at least `fuzzy_min_length` code points.
bool tokens_match(std::string_view a, std::string_view b, int fuzzy_min_length);

// Normalized view of a cited opinion, reusable across many quotations.
class CitedIndex {
 public:
  explicit CitedIndex(const Opinion& cited);

  const Opinion& opinion() const { return *opinion_; }
  std::size_t size() const { return tokens_.size(); }
  const std::string& token(std::size_t k) const { return types_[tokens_[k]].text; }
  std::size_t word_of(std::size_t k) const { return word_index_[k]; }

  // Cited token positions (ascending) equal to `norm` under tokens_match.
  std::vector<std::size_t> positions(const std::string& norm, int fuzzy_min_length) const;

 private:
  struct TokenType {
    std::string text;
    std::u32string codepoints;
    std::vector<std::size_t> positions;
  };

  const Opinion* opinion_;
  std::vector<std::size_t> tokens_;      // token type id per position
  std::vector<std::size_t> word_index_;  // cited word index per position
  std::vector<TokenType> types_;
  std::unordered_map<std::string, std::size_t> type_of_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> types_by_length_;
};

MatchResult qualify(std::string_view quote, const CitedIndex& cited,
                    const MatchParams& params);
MatchResult qualify(std::string_view quote, const Opinion& cited,
                    const MatchParams& params);

struct ClassMetrics {
  std::optional<double> precision;  // absent when the class is never predicted
  std::optional<double> recall;     // absent when the class never occurs
  std::int64_t support = 0;
};

struct AuditReport {
  std::int64_t true_positive = 0;
  std::int64_t false_positive = 0;
  std::int64_t false_negative = 0;
  std::int64_t true_negative = 0;
  ClassMetrics positive;
  ClassMetrics negative;
};

// Confusion counts and per-class precision/recall of (predicted, gold) pairs.
AuditReport score_decisions(const std::vector<std::pair<bool, bool>>& decisions);

struct LabeledQuote {
  std::string quote;
  std::reference_wrapper<const Opinion> cited;
  bool gold = false;
};

AuditReport audit_classifier(const std::vector<LabeledQuote>& labeled,
                             const MatchParams& params);

}  // namespace quotegraph
