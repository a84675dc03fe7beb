#include "quotegraph/verbatim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "quotegraph/error.hpp"
#include "utf8.hpp"

namespace quotegraph {

namespace {

bool is_ellipsis_core(std::string_view core) {
  if (core.empty()) return false;
  std::size_t dots = 0;
  bool has_char = false;
  for (std::size_t i = 0; i < core.size();) {
    char32_t cp = utf8::decode(core, i);
    if (cp == U'.') {
      ++dots;
    } else if (cp == U'…') {
      has_char = true;
    } else {
      return false;
    }
  }
  return has_char || dots >= 3 || dots == 1;
}

std::string_view strip_brackets(std::string_view s) {
  auto bracket = [](char c) {
    return c == '[' || c == ']' || c == '(' || c == ')' || c == '"' || c == '\'' ||
           c == ',' || c == ';' || c == ':';
  };
  while (!s.empty() && bracket(s.front())) s.remove_prefix(1);
  while (!s.empty() && bracket(s.back())) s.remove_suffix(1);
  return s;
}

bool starts_with_ellipsis(std::string_view s) {
  s = strip_brackets(s);
  return s.starts_with("...") || s.starts_with("…");
}

bool ends_with_ellipsis(std::string_view s) {
  s = strip_brackets(s);
  return s.ends_with("...") || s.ends_with("…");
}

// True when a and b differ by at most one insertion, deletion or
// substitution.
bool within_one_edit(const std::u32string& a, const std::u32string& b) {
  const std::u32string& longer = a.size() >= b.size() ? a : b;
  const std::u32string& shorter = a.size() >= b.size() ? b : a;
  if (longer.size() - shorter.size() > 1) return false;
  std::size_t i = 0;
  while (i < shorter.size() && shorter[i] == longer[i]) ++i;
  if (i == shorter.size()) return true;
  if (longer.size() == shorter.size())
    return std::equal(shorter.begin() + static_cast<std::ptrdiff_t>(i) + 1, shorter.end(),
                      longer.begin() + static_cast<std::ptrdiff_t>(i) + 1);
  return std::equal(shorter.begin() + static_cast<std::ptrdiff_t>(i), shorter.end(),
                    longer.begin() + static_cast<std::ptrdiff_t>(i) + 1);
}

struct Cell {
  std::size_t i;  // quotation token
  std::size_t j;  // cited token position
  int matched;
  std::int64_t gap;
  std::ptrdiff_t prev;
};

bool better(int m1, std::int64_t g1, int m2, std::int64_t g2) {
  return m1 > m2 || (m1 == m2 && g1 < g2);
}

}  // namespace

void MatchParams::validate() const {
  if (max_gap_run < 0)
    throw Error(ErrorKind::kUsage, "InvalidParams", "max_gap_run must be >= 0");
  if (!(max_skip_ratio >= 0.0 && max_skip_ratio < 0.5))
    throw Error(ErrorKind::kUsage, "InvalidParams", "max_skip_ratio must be in [0, 0.5)");
  if (fuzzy_min_length < 1)
    throw Error(ErrorKind::kUsage, "InvalidParams", "fuzzy_min_length must be >= 1");
  if (min_tokens < 1)
    throw Error(ErrorKind::kUsage, "InvalidParams", "min_tokens must be >= 1");
}

QuoteTokens quote_tokens(std::string_view quote) {
  QuoteTokens out;
  bool pending = false;
  for (const Span& w : tokenize_words(quote)) {
    std::string_view surface = slice(quote, w);
    std::string norm = normalize_token(surface);
    if (norm.empty()) {
      if (is_ellipsis_core(strip_brackets(surface))) pending = true;
      continue;
    }
    const bool elided = !out.tokens.empty() && (pending || starts_with_ellipsis(surface));
    out.tokens.push_back(std::move(norm));
    out.elided_before.push_back(elided);
    pending = ends_with_ellipsis(surface);
  }
  return out;
}

bool tokens_match(std::string_view a, std::string_view b, int fuzzy_min_length) {
  if (a == b) return true;
  std::u32string ua = to_u32(a), ub = to_u32(b);
  if (std::max(ua.size(), ub.size()) < static_cast<std::size_t>(fuzzy_min_length))
    return false;
  return within_one_edit(ua, ub);
}

CitedIndex::CitedIndex(const Opinion& cited) : opinion_(&cited) {
  for (std::size_t w = 0; w < cited.words.size(); ++w) {
    std::string norm = normalize_token(cited.word(w));
    if (norm.empty()) continue;
    auto [it, inserted] = type_of_.try_emplace(norm, types_.size());
    if (inserted) {
      TokenType t;
      t.codepoints = to_u32(norm);
      t.text = std::move(norm);
      types_by_length_[t.codepoints.size()].push_back(types_.size());
      types_.push_back(std::move(t));
    }
    types_[it->second].positions.push_back(tokens_.size());
    tokens_.push_back(it->second);
    word_index_.push_back(w);
  }
}

std::vector<std::size_t> CitedIndex::positions(const std::string& norm,
                                               int fuzzy_min_length) const {
  std::vector<std::size_t> out;
  auto exact = type_of_.find(norm);
  if (exact != type_of_.end()) out = types_[exact->second].positions;

  const std::u32string cps = to_u32(norm);
  const std::size_t len = cps.size();
  const std::size_t min_len = len > 0 ? len - 1 : 0;
  bool merged = false;
  for (std::size_t l = min_len; l <= len + 1; ++l) {
    if (std::max(l, len) < static_cast<std::size_t>(fuzzy_min_length)) continue;
    auto bucket = types_by_length_.find(l);
    if (bucket == types_by_length_.end()) continue;
    for (std::size_t type : bucket->second) {
      const TokenType& t = types_[type];
      if (t.text == norm || !within_one_edit(cps, t.codepoints)) continue;
      out.insert(out.end(), t.positions.begin(), t.positions.end());
      merged = true;
    }
  }
  if (merged) std::sort(out.begin(), out.end());
  return out;
}

MatchResult qualify(std::string_view quote, const Opinion& cited,
                    const MatchParams& params) {
  return qualify(quote, CitedIndex(cited), params);
}

MatchResult qualify(std::string_view quote, const CitedIndex& cited,
                    const MatchParams& params) {
  const QuoteTokens qt = quote_tokens(quote);
  const std::size_t c = qt.tokens.size();
  MatchResult result;
  result.candidate_tokens = static_cast<int>(c);
  if (c < static_cast<std::size_t>(params.min_tokens)) {
    result.status = MatchStatus::kTooShort;
    return result;
  }
  const auto skips = static_cast<std::size_t>(
      std::floor(params.max_skip_ratio * static_cast<double>(c) + 1e-9));
  const int required = static_cast<int>(c - std::min(skips, c));

  std::vector<Cell> cells;
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j : cited.positions(qt.tokens[i], params.fuzzy_min_length))
      cells.push_back({i, j, 1, 0, -1});
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return a.j != b.j ? a.j < b.j : a.i < b.i;
  });

  // Quotation indices that open a new elided segment.
  std::vector<std::size_t> boundaries;
  for (std::size_t i = 1; i < c; ++i)
    if (qt.elided_before[i]) boundaries.push_back(i);
  // Best predecessor across each boundary among finished columns, keyed on
  // (matched, gap - position).
  struct Carry {
    std::ptrdiff_t cell = -1;
    int matched = 0;
    std::int64_t key = 0;
  };
  std::vector<Carry> carry(boundaries.size());

  const auto gap_limit = static_cast<std::size_t>(params.max_gap_run);
  std::size_t column_begin = 0;
  while (column_begin < cells.size()) {
    const std::size_t j = cells[column_begin].j;
    std::size_t column_end = column_begin;
    while (column_end < cells.size() && cells[column_end].j == j) ++column_end;

    const std::size_t window_start_j = j > gap_limit + 1 ? j - gap_limit - 1 : 0;
    auto window_begin = static_cast<std::size_t>(
        std::lower_bound(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(column_begin),
                         window_start_j,
                         [](const Cell& cell, std::size_t value) { return cell.j < value; }) -
        cells.begin());

    for (std::size_t k = column_begin; k < column_end; ++k) {
      Cell& cell = cells[k];
      for (std::size_t p = window_begin; p < column_begin; ++p) {
        const Cell& prev = cells[p];
        if (prev.i >= cell.i) continue;
        int m = prev.matched + 1;
        std::int64_t g = prev.gap + static_cast<std::int64_t>(j - prev.j - 1);
        if (better(m, g, cell.matched, cell.gap)) {
          cell.matched = m;
          cell.gap = g;
          cell.prev = static_cast<std::ptrdiff_t>(p);
        }
      }
      // Latest boundary at or before this token; cells before it may sit
      // arbitrarily far back.
      auto it = std::upper_bound(boundaries.begin(), boundaries.end(), cell.i);
      if (it != boundaries.begin()) {
        const Carry& best = carry[static_cast<std::size_t>(it - boundaries.begin()) - 1];
        if (best.cell >= 0) {
          int m = best.matched + 1;
          std::int64_t g = best.key + static_cast<std::int64_t>(j) - 1;
          if (better(m, g, cell.matched, cell.gap)) {
            cell.matched = m;
            cell.gap = g;
            cell.prev = best.cell;
          }
        }
      }
    }
    for (std::size_t b = 0; b < boundaries.size(); ++b) {
      for (std::size_t k = column_begin; k < column_end; ++k) {
        const Cell& cell = cells[k];
        if (cell.i >= boundaries[b]) continue;
        std::int64_t key = cell.gap - static_cast<std::int64_t>(cell.j);
        if (carry[b].cell < 0 || better(cell.matched, key, carry[b].matched, carry[b].key))
          carry[b] = {static_cast<std::ptrdiff_t>(k), cell.matched, key};
      }
    }
    column_begin = column_end;
  }

  std::ptrdiff_t best = -1;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (best < 0 || better(cells[k].matched, cells[k].gap,
                           cells[static_cast<std::size_t>(best)].matched,
                           cells[static_cast<std::size_t>(best)].gap))
      best = static_cast<std::ptrdiff_t>(k);
  }
  if (best < 0 || cells[static_cast<std::size_t>(best)].matched < required) {
    result.status = MatchStatus::kNotMatched;
    if (best >= 0) {
      result.matched_tokens = cells[static_cast<std::size_t>(best)].matched;
      result.gap_tokens = static_cast<int>(cells[static_cast<std::size_t>(best)].gap);
    }
    return result;
  }

  const Cell& end = cells[static_cast<std::size_t>(best)];
  for (std::ptrdiff_t k = best; k >= 0; k = cells[static_cast<std::size_t>(k)].prev) {
    const Cell& cell = cells[static_cast<std::size_t>(k)];
    result.matched_pairs.emplace_back(cell.i, cited.word_of(cell.j));
  }
  std::reverse(result.matched_pairs.begin(), result.matched_pairs.end());

  const double m = end.matched;
  const double g = static_cast<double>(end.gap);
  result.status = MatchStatus::kMatched;
  result.matched = true;
  result.matched_tokens = end.matched;
  result.gap_tokens = static_cast<int>(end.gap);
  result.score = (m / static_cast<double>(c)) * (m / (m + g));
  result.cited_token_range = {result.matched_pairs.front().second,
                              result.matched_pairs.back().second + 1};
  return result;
}

AuditReport score_decisions(const std::vector<std::pair<bool, bool>>& decisions) {
  AuditReport r;
  for (auto [predicted, gold] : decisions) {
    if (predicted && gold) ++r.true_positive;
    else if (predicted && !gold) ++r.false_positive;
    else if (!predicted && gold) ++r.false_negative;
    else ++r.true_negative;
  }
  auto ratio = [](std::int64_t num, std::int64_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  r.positive.support = r.true_positive + r.false_negative;
  r.positive.precision = ratio(r.true_positive, r.true_positive + r.false_positive);
  r.positive.recall = ratio(r.true_positive, r.positive.support);
  r.negative.support = r.true_negative + r.false_positive;
  r.negative.precision = ratio(r.true_negative, r.true_negative + r.false_negative);
  r.negative.recall = ratio(r.true_negative, r.negative.support);
  return r;
}

AuditReport audit_classifier(const std::vector<LabeledQuote>& labeled,
                             const MatchParams& params) {
  std::vector<std::pair<bool, bool>> decisions;
  decisions.reserve(labeled.size());
  for (const LabeledQuote& item : labeled)
    decisions.emplace_back(qualify(item.quote, item.cited.get(), params).matched, item.gold);
  return score_decisions(decisions);
}

}  // namespace quotegraph
