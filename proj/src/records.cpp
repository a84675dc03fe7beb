#include "quotegraph/records.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "quotegraph/error.hpp"

namespace quotegraph::records {

namespace {

[[noreturn]] void schema_error(std::int64_t line, const std::string& what) {
  throw Error(ErrorKind::kSchema, "SchemaError", "line " + std::to_string(line) + ": " + what);
}

void expect_fields(const Json& j, std::int64_t line, const std::set<std::string>& required,
                   const std::set<std::string>& optional = {}) {
  if (!j.is_object()) schema_error(line, "record is not an object");
  for (const auto& key : required)
    if (!j.contains(key)) schema_error(line, "missing field '" + key + "'");
  for (const auto& [key, value] : j.items())
    if (!required.count(key) && !optional.count(key))
      schema_error(line, "unexpected field '" + key + "'");
}

std::int64_t get_int(const Json& j, const char* key, std::int64_t line) {
  const Json& v = j.at(key);
  if (!v.is_number_integer()) schema_error(line, std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::string get_string(const Json& j, const char* key, std::int64_t line) {
  const Json& v = j.at(key);
  if (!v.is_string()) schema_error(line, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

double get_number(const Json& j, const char* key, std::int64_t line) {
  const Json& v = j.at(key);
  if (!v.is_number()) schema_error(line, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

bool get_bool(const Json& j, const char* key, std::int64_t line) {
  const Json& v = j.at(key);
  if (!v.is_boolean()) schema_error(line, std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "IoError", "cannot open " + path);
  return in;
}

}  // namespace

Json to_json(const VerbatimEdge& e) {
  Json j;
  j["citing_opinion_id"] = e.citing_opinion_id;
  j["cited_opinion_id"] = e.cited_opinion_id;
  j["sentence_id"] = e.sentence_id;
  j["verbatim"] = e.verbatim;
  j["snippet"] = e.snippet;
  j["score"] = e.score;
  return j;
}

Json to_json(const SentenceRecord& r) {
  Json j;
  j["opinion_id"] = r.opinion_id;
  j["sentence_id"] = r.sentence_id;
  j["raw_text"] = r.raw_text;
  j["highlight"] = r.highlight;
  j["count_citations"] = r.count_citations;
  return j;
}

Json to_json(const RankingRecord& r) {
  Json j;
  j["opinion_id"] = r.ranking.opinion_id;
  j["order"] = r.ranking.order;
  j["scores"] = r.ranking.scores;
  if (r.ranker) j["ranker"] = *r.ranker;
  if (r.seed) j["seed"] = *r.seed;
  return j;
}

Json to_json(const RankingMetrics& m) {
  return Json{{"p_at_1", m.p_at_1},
              {"p_at_r", m.p_at_r},
              {"average_precision", m.average_precision},
              {"reciprocal_rank", m.reciprocal_rank}};
}

Json to_json(const RougeScore& r) {
  return Json{{"precision", r.precision}, {"recall", r.recall}, {"f1", r.f1}};
}

Json to_json(const EvalReport& report) {
  Json j;
  j["options"] = {{"top_k", report.options.top_k},
                  {"truncate_words", report.options.truncate_words
                                         ? Json(*report.options.truncate_words)
                                         : Json(nullptr)}};
  j["opinions"] = report.opinions;
  j["skipped_no_relevant"] = report.skipped_no_relevant;
  j["mean"] = {{"MAP", report.mean_ranking.average_precision},
               {"MRR", report.mean_ranking.reciprocal_rank},
               {"P@1", report.mean_ranking.p_at_1},
               {"P@R", report.mean_ranking.p_at_r},
               {"rouge1", to_json(report.mean_rouge1)},
               {"rouge2", to_json(report.mean_rouge2)},
               {"rougeL", to_json(report.mean_rougeL)}};
  Json rows = Json::array();
  for (const OpinionEval& e : report.per_opinion)
    rows.push_back({{"opinion_id", e.opinion_id},
                    {"sentences", e.sentences},
                    {"relevant", e.relevant},
                    {"ranking", to_json(e.ranking)},
                    {"rouge1", to_json(e.rouge1)},
                    {"rouge2", to_json(e.rouge2)},
                    {"rougeL", to_json(e.rougeL)}});
  j["per_opinion"] = rows;
  return j;
}

VerbatimEdge edge_from_json(const Json& j, std::int64_t line) {
  expect_fields(j, line, {"citing_opinion_id", "cited_opinion_id", "sentence_id", "verbatim",
                          "snippet", "score"});
  VerbatimEdge e;
  e.citing_opinion_id = get_int(j, "citing_opinion_id", line);
  e.cited_opinion_id = get_int(j, "cited_opinion_id", line);
  e.sentence_id = get_int(j, "sentence_id", line);
  e.verbatim = get_string(j, "verbatim", line);
  e.snippet = get_string(j, "snippet", line);
  e.score = get_number(j, "score", line);
  return e;
}

SentenceRecord sentence_from_json(const Json& j, std::int64_t line) {
  expect_fields(j, line, {"opinion_id", "sentence_id", "raw_text", "highlight", "count_citations"});
  SentenceRecord r;
  r.opinion_id = get_int(j, "opinion_id", line);
  r.sentence_id = get_int(j, "sentence_id", line);
  r.raw_text = get_string(j, "raw_text", line);
  r.highlight = get_bool(j, "highlight", line);
  r.count_citations = get_int(j, "count_citations", line);
  if (r.highlight != (r.count_citations >= 1))
    schema_error(line, "highlight must be true exactly when count_citations >= 1");
  return r;
}

RankingRecord ranking_from_json(const Json& j, std::int64_t line) {
  expect_fields(j, line, {"opinion_id", "order", "scores"}, {"ranker", "seed"});
  RankingRecord r;
  r.ranking.opinion_id = get_int(j, "opinion_id", line);
  const Json& order = j.at("order");
  const Json& scores = j.at("scores");
  if (!order.is_array() || !scores.is_array() || order.size() != scores.size())
    schema_error(line, "'order' and 'scores' must be arrays of equal length");
  for (const Json& v : order) {
    if (!v.is_number_integer()) schema_error(line, "'order' entries must be integers");
    r.ranking.order.push_back(v.get<std::int64_t>());
  }
  for (const Json& v : scores) {
    if (!v.is_number()) schema_error(line, "'scores' entries must be numbers");
    r.ranking.scores.push_back(v.get<double>());
  }
  std::vector<std::int64_t> sorted = r.ranking.order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != static_cast<std::int64_t>(i))
      schema_error(line, "'order' must be a permutation of 0..n-1");
  if (j.contains("ranker")) r.ranker = get_string(j, "ranker", line);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
      schema_error(line, "'seed' must be an integer");
    r.seed = j.at("seed").get<std::uint64_t>();
  }
  return r;
}

void for_each_line(std::istream& in, const std::string& source,
                   const std::function<void(const Json&, std::int64_t)>& on_record) {
  std::string text;
  std::int64_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded())
      throw Error(ErrorKind::kSchema, "SchemaError",
                  source + " line " + std::to_string(line) + ": not valid JSON");
    try {
      on_record(j, line);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kSchema) throw;
      throw Error(ErrorKind::kSchema, e.code(), source + " " + e.message());
    }
  }
}

std::vector<VerbatimEdge> read_edges(const std::string& path) {
  auto in = open_input(path);
  std::vector<VerbatimEdge> out;
  for_each_line(in, path, [&](const Json& j, std::int64_t line) {
    out.push_back(edge_from_json(j, line));
  });
  return out;
}

std::vector<SentenceRecord> read_sentences(const std::string& path) {
  auto in = open_input(path);
  std::vector<SentenceRecord> out;
  for_each_line(in, path, [&](const Json& j, std::int64_t line) {
    out.push_back(sentence_from_json(j, line));
  });
  return out;
}

std::vector<RankingRecord> read_rankings(const std::string& path) {
  auto in = open_input(path);
  std::vector<RankingRecord> out;
  for_each_line(in, path, [&](const Json& j, std::int64_t line) {
    out.push_back(ranking_from_json(j, line));
  });
  return out;
}

void write_lines(const std::string& path, const std::vector<Json>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "IoError", "cannot write " + path);
  for (const Json& row : rows) out << row.dump() << '\n';
  if (!out) throw Error(ErrorKind::kIo, "IoError", "write failed for " + path);
}

void write_json(const std::string& path, const Json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "IoError", "cannot write " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::kIo, "IoError", "write failed for " + path);
}

std::size_t validate_graph_file(const std::string& path) {
  auto in = open_input(path);
  std::size_t count = 0;
  for_each_line(in, path, [&](const Json& j, std::int64_t line) {
    const VerbatimEdge e = edge_from_json(j, line);
    if (e.sentence_id < 0) schema_error(line, "graph records need a sentence_id >= 0");
    if (!(e.score >= 0.0 && e.score <= 1.0)) schema_error(line, "graph record score must be in [0, 1]");
    ++count;
  });
  return count;
}

std::size_t validate_highlights_file(const std::string& path) {
  return read_sentences(path).size();
}

}  // namespace quotegraph::records
