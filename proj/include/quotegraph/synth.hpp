#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "quotegraph/corpus.hpp"
#include "quotegraph/records.hpp"

// Synthetic corpora with known ground truth.
namespace quotegraph::synth {

struct MiniCorpusConfig {
  int opinions = 50;
  int planted_citations = 200;
  double ellipsis_rate = 0.30;
  int max_elided_tokens = 3;
  double noise_rate = 0.20;
  double char_noise = 0.02;
  double spanning_rate = 0.10;
  int min_quote_tokens = 8;
  int max_quote_tokens = 30;
  int misattributed_quotes = 40;
  int scare_quotes = 30;
  int random_quotes = 30;
  int missing_citations = 10;
  int self_citations = 2;
  int malformed_citations = 2;
  OpinionId first_id = 1001;
  std::uint64_t seed = 20211;
};

struct PlantedCitation {
  OpinionId citing_opinion_id = 0;
  OpinionId cited_opinion_id = 0;
  std::vector<std::int64_t> sentence_ids;
  std::string quote;
  bool ellipsis = false;
  bool noise = false;
};

struct MiniCorpus {
  std::vector<RawDocument> documents;
  std::vector<PlantedCitation> truth;
  // Sentence count of every opinion as laid out by the generator.
  std::map<OpinionId, std::int64_t> sentence_counts;
  std::int64_t missing_citations = 0;
  std::int64_t self_citations = 0;
  std::int64_t malformed_citations = 0;
  std::int64_t decoy_quotes = 0;
};

// Opinions cite only earlier opinions, with targets drawn preferentially by
// how often they are already cited. Every planted quote is copied from one
// plain sentence (or two consecutive ones) of the cited opinion and may carry
// one interior elision and character substitutions. Decoys are misattributed
// quotes, short scare quotes, random-word quotes and broken citation ids.
MiniCorpus make_mini_corpus(const MiniCorpusConfig& cfg = {});

records::Json to_json(const RawDocument& doc);
records::Json to_json(const PlantedCitation& p);
std::vector<PlantedCitation> read_truth(const std::string& path);
void write_corpus(const std::string& path, const std::vector<RawDocument>& docs);
void write_truth(const std::string& path, const std::vector<PlantedCitation>& truth);

struct CentralCorpusConfig {
  int opinions = 40;
  int sentences = 30;
  int central = 3;
  int topic_words = 10;
  OpinionId first_id = 5001;
  std::uint64_t seed = 7;
};

struct CentralCorpus {
  std::vector<RawDocument> documents;
  // Highlighted sentence ids per opinion.
  std::map<OpinionId, std::vector<std::int64_t>> highlights;
};

// Each opinion has a topic vocabulary; the highlighted sentences are built
// mostly from topic words while the others carry one or two of them.
CentralCorpus make_central_corpus(const CentralCorpusConfig& cfg = {});

// Shared word list used by the generators, all lowercase, at least four letters.
const std::vector<std::string>& vocabulary();

}  // namespace quotegraph::synth
