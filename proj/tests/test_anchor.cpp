#include <random>

#include "doctest.h"
#include "support/fixtures.hpp"

#include "quotegraph/anchor.hpp"

using namespace quotegraph;

namespace {

Snippet snippet_of(const std::string& text) {
  Snippet s;
  s.text = text;
  s.window_words = 100;
  return s;
}

std::string numbered_words(int from, int to) {
  std::string out;
  for (int i = from; i < to; ++i) {
    if (!out.empty()) out += ' ';
    out += "w" + std::to_string(i);
  }
  return out;
}

}  // namespace

TEST_CASE("extract_snippet: window arithmetic") {
  // Empty marker text so the marker contributes no words.
  const Opinion op = fixtures::plain(
      1, numbered_words(0, 120) + " <span class=\"citation\" data-id=\"2\"></span> " +
             numbered_words(120, 250));
  REQUIRE(op.words.size() == 250);
  REQUIRE(op.mentions.size() == 1);
  CHECK(op.mentions[0].word_index == 119);
  const Snippet s = extract_snippet(op, 0, 100);
  CHECK(s.text == numbered_words(20, 220));
  CHECK(s.citing_opinion_id == 1);
  CHECK(s.cited_opinion_id == 2);
}

TEST_CASE("extract_snippet: truncated at the document start") {
  const Opinion op = fixtures::plain(
      1, numbered_words(0, 4) + " <span class=\"citation\" data-id=\"2\"></span> " +
             numbered_words(4, 300));
  const Snippet s = extract_snippet(op, 0, 100);
  CHECK(s.text == numbered_words(0, 104));
}

TEST_CASE("extract_snippet: minimal window leaves the marker out") {
  const Opinion op = fixtures::plain(
      1, "alpha beta <span class=\"citation\" data-id=\"2\">CITE</span> gamma delta");
  CHECK(extract_snippet(op, 0, 1).text == "beta gamma");
}

TEST_CASE("extract_snippet: marker at the very start") {
  const Opinion op =
      fixtures::plain(1, "<span class=\"citation\" data-id=\"2\">1 Va. 2</span> alpha beta");
  CHECK(op.mentions[0].word_index == -1);
  CHECK(extract_snippet(op, 0, 5).text == "alpha beta");
}

TEST_CASE("extract_candidates: balanced pair") {
  auto c = extract_candidates(
      snippet_of("The court held there is \"no duty to protect invitees from assaults\" here."), {});
  REQUIRE(c.size() == 1);
  CHECK(c[0].quoted_text == "no duty to protect invitees from assaults");
  CHECK(c[0].word_count == 7);
}

TEST_CASE("extract_candidates: below the minimum length") {
  CandidateCounters counters;
  auto c = extract_candidates(snippet_of("so-called \"a b c\" rule"), {}, &counters);
  CHECK(c.empty());
  CHECK(counters.too_short == 1);
}

TEST_CASE("extract_candidates: above the maximum length") {
  AnchorConfig cfg;
  cfg.max_quote_words = 6;
  CandidateCounters counters;
  auto c = extract_candidates(snippet_of("\"one two three four five six seven\""), cfg, &counters);
  CHECK(c.empty());
  CHECK(counters.too_long == 1);
}

TEST_CASE("extract_candidates: the quoted passage around a citation") {
  const Opinion op = fixtures::parse(1058281, fixtures::kWrightCiting);
  const Snippet s = extract_snippet(op, 0, 100);
  auto c = extract_candidates(s, {});
  REQUIRE(c.size() == 1);
  CHECK(c[0].quoted_text == fixtures::kWrightQuote);
}

TEST_CASE("extract_candidates: curly quotes, guillemets and nesting") {
  auto c = extract_candidates(
      snippet_of("He wrote “the phrase “inner words” stays inside the outer one” and «five words "
                 "go in here»."),
      {});
  REQUIRE(c.size() == 2);
  CHECK(c[0].quoted_text == "the phrase “inner words” stays inside the outer one");
  CHECK(c[1].quoted_text == "five words go in here");
}

TEST_CASE("extract_candidates: apostrophes do not open single quotes") {
  auto c = extract_candidates(
      snippet_of("The court's view was 'the owner's duty is not absolute here' in that case."), {});
  REQUIRE(c.size() == 1);
  CHECK(c[0].quoted_text == "the owner's duty is not absolute here");
}

TEST_CASE("extract_candidates: a closer left at the window start does not shift pairing") {
  auto c = extract_candidates(
      snippet_of("tail of an earlier quotation\" Smith v. Jones. Later \"one two three four five "
                 "six\" again."),
      {});
  REQUIRE(c.size() == 1);
  CHECK(c[0].quoted_text == "one two three four five six");
}

TEST_CASE("extract_candidates: unmatched opener is counted") {
  CandidateCounters counters;
  auto c = extract_candidates(snippet_of("“never closed one two three four five"), {}, &counters);
  CHECK(c.empty());
  CHECK(counters.unbalanced_quotes == 1);
}

TEST_CASE("property: candidates are substrings, bounded by delimiter count, padding-invariant") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> pieces = {"alpha", "beta", "gamma", "\"", "“", "”", "'",
                                           "it's",  "x",    "«",     "»",  "delta", "epsilon"};
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const int n = std::uniform_int_distribution<int>(0, 40)(rng);
    std::size_t delimiters = 0;
    for (int k = 0; k < n; ++k) {
      const std::string& p = pieces[std::uniform_int_distribution<std::size_t>(0, pieces.size() - 1)(rng)];
      if (p == "\"" || p == "“" || p == "”" || p == "'" || p == "«" || p == "»") ++delimiters;
      // Glue delimiters to the next word half of the time.
      text += p;
      if (std::uniform_int_distribution<int>(0, 1)(rng)) text += ' ';
    }
    AnchorConfig cfg;
    cfg.min_quote_words = 1;
    auto c = extract_candidates(snippet_of(text), cfg);
    CHECK(c.size() <= delimiters / 2);
    for (const auto& cand : c) CHECK(text.find(cand.quoted_text) != std::string::npos);
    auto padded = extract_candidates(snippet_of("plain words " + text + " more words"), cfg);
    REQUIRE(padded.size() == c.size());
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(padded[i].quoted_text == c[i].quoted_text);
  }
}
