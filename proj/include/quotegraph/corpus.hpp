#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace quotegraph {

using OpinionId = std::int64_t;

// Half-open byte interval [begin, end) into a UTF-8 string.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
  bool operator==(const Span&) const = default;
};

inline std::string_view slice(std::string_view text, Span s) {
  return text.substr(s.begin, s.end - s.begin);
}

struct RawDocument {
  OpinionId opinion_id = 0;
  std::string markup;
};

struct CitationMention {
  OpinionId cited_opinion_id = 0;
  // Where the citation marker text sits in the plain text.
  Span char_span;
  // Index of the last word that ends before the marker, -1 if the marker
  // opens the document.
  std::int64_t word_index = -1;
};

struct Opinion {
  OpinionId opinion_id = 0;
  std::string plain_text;
  std::vector<Span> words;
  std::vector<Span> sentences;
  std::vector<CitationMention> mentions;
  // For every sentence, the half-open range of word indices it contains.
  std::vector<std::pair<std::size_t, std::size_t>> sentence_words;

  std::string_view word(std::size_t i) const { return slice(plain_text, words[i]); }
  std::string_view sentence(std::size_t i) const {
    return slice(plain_text, sentences[i]);
  }
  std::size_t sentence_count() const { return sentences.size(); }
  // Sentence index holding word i.
  std::size_t sentence_of_word(std::size_t i) const;
};

// How citation markers are encoded in the markup. The default matches
// <span class="citation" data-id="N">...</span>.
struct TagConvention {
  std::string element = "span";
  std::string class_name = "citation";
  std::string id_attribute = "data-id";
};

// Per-record problems found while ingesting. Nothing here is fatal.
struct DropReport {
  std::int64_t lines_read = 0;
  std::int64_t unparseable_lines = 0;
  std::int64_t duplicate_ids = 0;
  std::int64_t empty_documents = 0;
  std::int64_t malformed_citation_ids = 0;
  std::int64_t self_citations = 0;
  std::int64_t missing_cited_opinions = 0;
  // Line numbers (1-based) of unparseable records, capped to keep the
  // report small.
  std::vector<std::int64_t> unparseable_line_numbers;

  void merge(const DropReport& other);
};

// Strips markup, decodes entities, collects citation mentions and segments
// the result. Returns nullopt when no text is left.
std::optional<Opinion> parse_document(const RawDocument& raw,
                                      DropReport* report = nullptr,
                                      const TagConvention& tags = {});

// Maximal runs of non-whitespace characters.
std::vector<Span> tokenize_words(std::string_view text);

// Rule-based sentence boundaries; see default_abbreviations().
std::vector<Span> split_sentences(std::string_view text);

// Words that end in '.' but do not end a sentence.
const std::vector<std::string>& default_abbreviations();

// NFC, lowercase, trailing and leading non-alphanumerics removed. Empty when
// the surface is pure punctuation.
std::string normalize_token(std::string_view surface);

// Number of Unicode code points in a UTF-8 string.
std::size_t codepoint_count(std::string_view utf8);
std::u32string to_u32(std::string_view utf8);

// Reads newline-delimited {"opinion_id": int, "html": string} records.
// Bad lines are counted in the report and skipped; duplicate ids keep the
// first occurrence. Result is sorted by opinion_id.
std::vector<RawDocument> read_corpus(std::istream& in, DropReport* report);
std::vector<RawDocument> read_corpus_file(const std::string& path,
                                          DropReport* report);

// Parses every document (optionally on several threads) and returns opinions
// sorted by id.
std::vector<Opinion> parse_corpus(const std::vector<RawDocument>& raws,
                                  DropReport* report, int workers = 1,
                                  const TagConvention& tags = {});

// Binary search in an id-sorted opinion list.
const Opinion* find_opinion(const std::vector<Opinion>& sorted, OpinionId id);

}  // namespace quotegraph
