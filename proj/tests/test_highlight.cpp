#include <algorithm>
#include <random>

#include "doctest.h"
#include "support/fixtures.hpp"

#include "quotegraph/error.hpp"
#include "quotegraph/highlight.hpp"
#include "quotegraph/pipeline.hpp"

using namespace quotegraph;

namespace {

VerbatimEdge edge(OpinionId citing, OpinionId cited, std::int64_t sentence) {
  return {citing, cited, sentence, "quote", "snippet", 1.0};
}

std::int64_t total_count(const std::vector<SentenceRecord>& records) {
  std::int64_t sum = 0;
  for (const auto& r : records) sum += r.count_citations;
  return sum;
}

}  // namespace

TEST_CASE("align_sentences: single sentence") {
  const Opinion cited = fixtures::plain(
      1, "First sentence here. The second sentence holds the whole quoted passage inside. Third.");
  auto r = qualify("second sentence holds the whole quoted", cited, {});
  REQUIRE(r.matched);
  CHECK(align_sentences(r, cited) == std::vector<std::size_t>{1});
}

TEST_CASE("align_sentences: quote straddling a boundary") {
  const Opinion cited = fixtures::plain(
      1, "Zero here. Alpha beta gamma delta. Epsilon zeta eta theta. Last one.");
  auto r = qualify("gamma delta. Epsilon zeta eta", cited, {});
  REQUIRE(r.matched);
  CHECK(align_sentences(r, cited) == std::vector<std::size_t>{1, 2});
}

TEST_CASE("align_sentences: elided quote spanning two cited sentences") {
  const Opinion cited = fixtures::parse(1239944, fixtures::kWrightCited);
  auto r = qualify(fixtures::kWrightQuote, cited, {});
  REQUIRE(r.matched);
  CHECK(align_sentences(r, cited) == std::vector<std::size_t>{3, 4});
}

TEST_CASE("align_sentences: requires a match") {
  const Opinion cited = fixtures::plain(1, "Nothing to see.");
  CHECK_THROWS_AS(align_sentences(MatchResult{}, cited), Error);
}

TEST_CASE("build_highlights") {
  const std::vector<Opinion> corpus = {
      fixtures::plain(3, "One. Two. Three."),
      fixtures::plain(7, "Aa. Bb. Cc. Dd. Ee. Ff."),
  };
  SUBCASE("no edges") {
    CHECK(build_highlights({}, corpus).empty());
    auto all = build_highlights({}, corpus, true);
    CHECK(all.size() == 9);
    for (const auto& r : all) {
      CHECK_FALSE(r.highlight);
      CHECK(r.count_citations == 0);
    }
  }
  SUBCASE("two citing opinions, same sentence") {
    auto out = build_highlights({edge(1, 7, 4), edge(2, 7, 4)}, corpus);
    REQUIRE(out.size() == 6);
    CHECK(out[4].opinion_id == 7);
    CHECK(out[4].sentence_id == 4);
    CHECK(out[4].raw_text == "Ee.");
    CHECK(out[4].count_citations == 2);
    CHECK(out[4].highlight);
    CHECK(total_count(out) == 2);
  }
  SUBCASE("missing cited opinion and bad sentence ids are dropped and counted") {
    HighlightCounters counters;
    auto out = build_highlights({edge(1, 99, 0), edge(1, 3, 3), edge(1, 3, -1), edge(1, 3, 0)},
                                corpus, false, &counters);
    CHECK(counters.missing_cited_opinion == 1);
    CHECK(counters.invalid_sentence_id == 2);
    CHECK(out.size() == 3);
    CHECK(total_count(out) == 1);
  }
}

TEST_CASE("build_highlights: three planted quotes into two sentences") {
  const std::string cited_text =
      "Preamble text. The covenant of quiet enjoyment runs with the land in every case. "
      "A tenant may withhold rent when the landlord fails to make repairs. Closing words.";
  const std::string q1 = "The covenant of quiet enjoyment runs with the land";
  const std::string q2 = "tenant may withhold rent when the landlord fails to make repairs";
  auto cite = [](const std::string& quote) {
    return "As the court said, \"" + quote +
           ",\" <span class=\"citation\" data-id=\"10\">1 Va. 1</span> (1990).";
  };
  std::vector<Opinion> corpus = {
      fixtures::plain(10, cited_text),
      fixtures::plain(20, cite(q1)),
      fixtures::plain(30, cite(q1)),
      fixtures::plain(40, cite(q2)),
  };
  PipelineConfig cfg;
  auto out = run_pipeline(corpus, cfg);
  CHECK(out.edges.size() == 3);
  std::vector<std::int64_t> counts;
  for (const auto& r : out.highlights)
    if (r.highlight) counts.push_back(r.count_citations);
  CHECK(counts == std::vector<std::int64_t>{2, 1});
  CHECK(total_count(out.highlights) == static_cast<std::int64_t>(out.edges.size()));
}

TEST_CASE("property: counts sum to edges and are permutation invariant") {
  std::vector<Opinion> corpus;
  for (int id = 1; id <= 10; ++id) corpus.push_back(fixtures::plain(id, "S one. S two. S three. S four."));
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<VerbatimEdge> edges;
    const int n = std::uniform_int_distribution<int>(0, 40)(rng);
    for (int k = 0; k < n; ++k)
      edges.push_back(edge(std::uniform_int_distribution<int>(1, 10)(rng),
                           std::uniform_int_distribution<int>(1, 10)(rng),
                           std::uniform_int_distribution<int>(0, 3)(rng)));
    auto base = build_highlights(edges, corpus);
    CHECK(total_count(base) == n);
    for (const auto& r : base) CHECK(r.highlight == (r.count_citations >= 1));
    std::shuffle(edges.begin(), edges.end(), rng);
    CHECK(build_highlights(edges, corpus) == base);
  }
}
