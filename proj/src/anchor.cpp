#include "quotegraph/anchor.hpp"

#include <algorithm>

#include <unicode/uchar.h>

#include "utf8.hpp"

namespace quotegraph {

namespace {

struct CodePoint {
  char32_t value;
  std::size_t begin;
  std::size_t end;
};

std::vector<CodePoint> decode_all(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    std::size_t start = i;
    char32_t cp = utf8::decode(text, i);
    out.push_back({cp, start, i});
  }
  return out;
}

bool is_letter(const std::vector<CodePoint>& cps, std::ptrdiff_t idx) {
  if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(cps.size())) return false;
  return u_isalpha(static_cast<UChar32>(cps[static_cast<std::size_t>(idx)].value));
}

// Out-of-range positions count as whitespace.
bool is_space_at(const std::vector<CodePoint>& cps, std::ptrdiff_t idx) {
  if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(cps.size())) return true;
  return u_isUWhiteSpace(static_cast<UChar32>(cps[static_cast<std::size_t>(idx)].value));
}

}  // namespace

std::vector<QuotePair> AnchorConfig::default_delimiters() {
  return {{U'"', U'"', false},
          {U'“', U'”', false},
          {U'«', U'»', false},
          {U'\'', U'\'', true},
          {U'‘', U'’', true}};
}

Snippet extract_snippet(const Opinion& opinion, std::size_t mention_index, int n) {
  const CitationMention& mention = opinion.mentions.at(mention_index);
  const std::size_t window = static_cast<std::size_t>(std::max(n, 1));
  const auto& words = opinion.words;
  const std::int64_t w = mention.word_index;

  std::size_t before_begin = 0;
  std::size_t before_end = static_cast<std::size_t>(w + 1);
  if (before_end > window) before_begin = before_end - window;

  // Marker words are the contiguous run that overlaps the marker span.
  const Span marker = mention.char_span;
  std::size_t after_begin = before_end;
  while (after_begin < words.size()) {
    const Span& word = words[after_begin];
    bool overlaps = marker.empty()
                        ? (word.begin < marker.begin && word.end > marker.begin)
                        : (word.begin < marker.end && word.end > marker.begin);
    if (!overlaps && word.begin >= marker.begin) break;
    ++after_begin;
  }
  std::size_t after_end = std::min(words.size(), after_begin + window);

  Snippet snippet;
  snippet.citing_opinion_id = opinion.opinion_id;
  snippet.cited_opinion_id = mention.cited_opinion_id;
  snippet.mention_index = mention_index;
  snippet.window_words = static_cast<int>(window);
  auto append = [&](std::size_t i) {
    if (!snippet.text.empty()) snippet.text.push_back(' ');
    snippet.text.append(opinion.word(i));
  };
  for (std::size_t i = before_begin; i < before_end; ++i) append(i);
  for (std::size_t i = after_begin; i < after_end; ++i) append(i);
  return snippet;
}

std::vector<VerbatimCandidate> extract_candidates(const Snippet& snippet,
                                                  const AnchorConfig& cfg,
                                                  CandidateCounters* counters) {
  CandidateCounters scratch;
  CandidateCounters& counts = counters ? *counters : scratch;
  std::vector<VerbatimCandidate> out;
  const std::vector<CodePoint> cps = decode_all(snippet.text);
  const auto size = static_cast<std::ptrdiff_t>(cps.size());

  auto opener_for = [&](std::ptrdiff_t i) -> const QuotePair* {
    for (const QuotePair& q : cfg.delimiters) {
      if (cps[static_cast<std::size_t>(i)].value != q.open) continue;
      if (q.flanked && is_letter(cps, i - 1)) continue;
      // A symmetric mark opens only before text, so a closer left over at
      // the window start cannot shift the pairing.
      if (q.open == q.close && is_space_at(cps, i + 1)) continue;
      return &q;
    }
    return nullptr;
  };

  std::ptrdiff_t i = 0;
  while (i < size) {
    const QuotePair* pair = opener_for(i);
    if (pair == nullptr) {
      ++i;
      continue;
    }
    // Find the matching closer; distinct open/close characters may nest.
    std::ptrdiff_t close = -1;
    int depth = 0;
    for (std::ptrdiff_t j = i + 1; j < size; ++j) {
      char32_t c = cps[static_cast<std::size_t>(j)].value;
      if (c == pair->close && (!pair->flanked || !is_letter(cps, j + 1)) &&
          (pair->open != pair->close || !is_space_at(cps, j - 1))) {
        if (depth == 0) {
          close = j;
          break;
        }
        --depth;
      } else if (pair->open != pair->close && c == pair->open &&
                 (!pair->flanked || !is_letter(cps, j - 1))) {
        ++depth;
      }
    }
    if (close < 0) {
      ++counts.unbalanced_quotes;
      ++i;
      continue;
    }
    std::size_t begin = cps[static_cast<std::size_t>(i)].end;
    std::size_t end = cps[static_cast<std::size_t>(close)].begin;
    while (begin < end && utf8::is_space(snippet.text[begin])) ++begin;
    while (end > begin && utf8::is_space(snippet.text[end - 1])) --end;
    i = close + 1;

    std::string_view inner = std::string_view(snippet.text).substr(begin, end - begin);
    const int words = static_cast<int>(tokenize_words(inner).size());
    if (words < cfg.min_quote_words) {
      ++counts.too_short;
      continue;
    }
    if (words > cfg.max_quote_words) {
      ++counts.too_long;
      continue;
    }
    ++counts.candidates;
    out.push_back({snippet.mention_index, {begin, end}, std::string(inner), words});
  }
  return out;
}

}  // namespace quotegraph
