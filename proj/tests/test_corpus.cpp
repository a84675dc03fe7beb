#include <random>
#include <sstream>

#include "doctest.h"
#include "support/fixtures.hpp"

#include "quotegraph/corpus.hpp"
#include "quotegraph/synth.hpp"

using namespace quotegraph;

namespace {

std::vector<std::string> sentence_texts(const std::string& text) {
  std::vector<std::string> out;
  for (Span s : split_sentences(text)) out.emplace_back(slice(text, s));
  return out;
}

std::string strip_ws(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

void check_round_trip(const Opinion& op) {
  for (std::size_t w = 0; w < op.words.size(); ++w) {
    CHECK(op.word(w).find_first_of(" \t\n") == std::string_view::npos);
    CHECK_FALSE(op.word(w).empty());
  }
  std::string joined;
  for (std::size_t s = 0; s < op.sentence_count(); ++s) joined += op.sentence(s);
  CHECK(strip_ws(joined) == strip_ws(op.plain_text));
  for (const auto& m : op.mentions) CHECK(m.word_index < static_cast<std::int64_t>(op.words.size()));
  std::size_t covered = 0;
  for (const auto& [first, last] : op.sentence_words) {
    CHECK(first == covered);
    covered = last;
  }
  CHECK(covered == op.words.size());
}

}  // namespace

TEST_CASE("parse_document: single citation tag") {
  RawDocument raw{7, "<p>As held. <span class=\"citation\" data-id=\"3\">Roe v. Doe</span> applies.</p>"};
  auto op = parse_document(raw);
  REQUIRE(op);
  CHECK(op->plain_text == "As held. Roe v. Doe applies.");
  REQUIRE(op->mentions.size() == 1);
  CHECK(op->mentions[0].cited_opinion_id == 3);
  CHECK(slice(op->plain_text, op->mentions[0].char_span) == "Roe v. Doe");
  CHECK(op->mentions[0].word_index == 1);
  check_round_trip(*op);
}

TEST_CASE("parse_document: no citation tags") {
  auto op = parse_document({1, "<p>Nothing cited here.</p>"});
  REQUIRE(op);
  CHECK(op->mentions.empty());
}

TEST_CASE("parse_document: quoted passage marker sits after the case name") {
  const Opinion op = fixtures::parse(1058281, fixtures::kWrightCiting);
  REQUIRE(op.mentions.size() == 1);
  CHECK(op.mentions[0].cited_opinion_id == 1239944);
  REQUIRE(op.mentions[0].word_index >= 0);
  CHECK(op.word(static_cast<std::size_t>(op.mentions[0].word_index)) == "Webb,");
  check_round_trip(op);
}

TEST_CASE("parse_document: entities, comments, scripts and block breaks") {
  auto op = parse_document(
      {2, "<div>Smith&nbsp;&amp; Co&#46; won.<!-- hidden --><script>var x = 1;</script></div>"
          "<div>Next&#x20;line.</div>"});
  REQUIRE(op);
  CHECK(op->plain_text == "Smith & Co. won.\nNext line.");
  CHECK(op->sentence_count() == 2);
}

TEST_CASE("parse_document: malformed and self citations are counted and skipped") {
  DropReport drops;
  auto op = parse_document(
      {9, "<p>See <span class=\"citation\" data-id=\"x12\">A</span> and "
          "<span class=\"citation\" data-id=\"9\">B</span> and "
          "<span class=\"citation\" data-id=\"4\">C</span>.</p>"},
      &drops);
  REQUIRE(op);
  CHECK(op->mentions.size() == 1);
  CHECK(drops.malformed_citation_ids == 1);
  CHECK(drops.self_citations == 1);
}

TEST_CASE("parse_document: empty markup yields nothing") {
  DropReport drops;
  CHECK_FALSE(parse_document({3, "<p>  </p>"}, &drops));
  CHECK(drops.empty_documents == 1);
}

TEST_CASE("parse_document is pure") {
  RawDocument raw{5, fixtures::kWrightCited};
  auto a = parse_document(raw), b = parse_document(raw);
  REQUIRE(a);
  REQUIRE(b);
  CHECK(a->plain_text == b->plain_text);
  CHECK(a->words == b->words);
  CHECK(a->sentences == b->sentences);
}

TEST_CASE("tokenize_words") {
  auto w = tokenize_words("a  b\tc");
  REQUIRE(w.size() == 3);
  CHECK(w[0] == Span{0, 1});
  CHECK(w[1] == Span{3, 4});
  CHECK(w[2] == Span{5, 6});
  CHECK(tokenize_words("").empty());
  CHECK(tokenize_words("Wright v. Webb, 920-21 (1987).").size() == 5);
}

TEST_CASE("split_sentences") {
  CHECK(sentence_texts("It rained. She left.") ==
        std::vector<std::string>{"It rained.", "She left."});
  CHECK(sentence_texts("See Tate Rice, 227 Va. 341, 345 (1984). Ordinarily, the owner is liable.") ==
        std::vector<std::string>{"See Tate Rice, 227 Va. 341, 345 (1984).",
                                 "Ordinarily, the owner is liable."});
  CHECK(sentence_texts("no terminal punctuation here").size() == 1);
  CHECK(sentence_texts("").empty());
  CHECK(sentence_texts("Held in Smith v. Jones. The rule applies.").size() == 2);
  CHECK(sentence_texts("The U.S. Supreme Court agreed. So did we.").size() == 2);
  CHECK(sentence_texts("J. Smith wrote it. It stands.").size() == 2);
  CHECK(sentence_texts("He said \"stop.\" Then he left.").size() == 2);
  CHECK(sentence_texts("Is it? Yes! It is.").size() == 3);
  CHECK(sentence_texts("Mr. Smith paid 3.5 dollars. Done.").size() == 2);
}

TEST_CASE("split_sentences: the cited passage") {
  const Opinion op = fixtures::parse(1239944, fixtures::kWrightCited);
  REQUIRE(op.sentence_count() == 7);
  CHECK(op.sentence(3).starts_with("Ordinarily, the owner"));
  CHECK(op.sentence(4).starts_with("Restatement (Second)"));
  CHECK(op.sentence(4).ends_with("from such assaults."));
  check_round_trip(op);
}

TEST_CASE("normalize_token") {
  CHECK(normalize_token("\"Ordinarily,") == "ordinarily");
  CHECK(normalize_token("[unless]") == "unless");
  CHECK(normalize_token("...") == "");
  CHECK(normalize_token("920-21") == "920-21");
  CHECK(normalize_token("ÉCOLE.") == "école");
  // Decomposed e + combining acute composes to the same token.
  CHECK(normalize_token("e\xCC\x81t\xC3\xA9") == normalize_token("\xC3\xA9t\xC3\xA9"));
  CHECK(codepoint_count("école") == 5);
}

TEST_CASE("read_corpus: drops bad lines and duplicates, sorts by id") {
  std::istringstream in(
      "{\"opinion_id\": 5, \"html\": \"<p>Five.</p>\"}\n"
      "not json\n"
      "{\"opinion_id\": 2, \"html\": \"<p>Two.</p>\"}\n"
      "{\"opinion_id\": 5, \"html\": \"<p>Again.</p>\"}\n"
      "{\"opinion_id\": \"x\", \"html\": \"<p>Bad id.</p>\"}\n"
      "\n");
  DropReport drops;
  auto docs = read_corpus(in, &drops);
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].opinion_id == 2);
  CHECK(docs[1].opinion_id == 5);
  CHECK(docs[1].markup == "<p>Five.</p>");
  CHECK(drops.unparseable_lines == 2);
  CHECK(drops.unparseable_line_numbers == std::vector<std::int64_t>{2, 5});
  CHECK(drops.duplicate_ids == 1);
}

TEST_CASE("parse_corpus: worker count does not change the result") {
  const auto mini = synth::make_mini_corpus();
  DropReport d1, d4;
  auto one = parse_corpus(mini.documents, &d1, 1);
  auto four = parse_corpus(mini.documents, &d4, 4);
  REQUIRE(one.size() == four.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].opinion_id == four[i].opinion_id);
    CHECK(one[i].words == four[i].words);
    CHECK(one[i].sentences == four[i].sentences);
  }
  CHECK(d1.self_citations == d4.self_citations);
  CHECK(find_opinion(one, 1001) == &one[0]);
  CHECK(find_opinion(one, 99) == nullptr);
}

TEST_CASE("property: offsets round-trip on generated documents") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> pieces = {"word", "Va.", "v.", "U.S.", "(1987).", "It", "said",
                                           "\"quoted", "text.\"", "No.", "5.", "Then", "é",
                                           "<b>bold</b>", "&amp;", "\n", "  ", "end."};
  for (int doc = 0; doc < 200; ++doc) {
    std::string html = "<p>";
    const int n = std::uniform_int_distribution<int>(0, 60)(rng);
    for (int k = 0; k < n; ++k) {
      html += pieces[std::uniform_int_distribution<std::size_t>(0, pieces.size() - 1)(rng)];
      html += ' ';
      if (k % 17 == 5) html += "<span class=\"citation\" data-id=\"42\">1 Va. 2</span> ";
    }
    html += "</p>";
    auto op = parse_document({doc + 100, html});
    if (op) check_round_trip(*op);
  }
}
