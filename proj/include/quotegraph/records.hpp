#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "quotegraph/evalkit.hpp"
#include "quotegraph/highlight.hpp"

// Newline-delimited record files. Every reader validates the exact field set
// and types, and reports the 1-based line number of the first bad record.
namespace quotegraph::records {

using Json = nlohmann::ordered_json;

inline constexpr const char* kGraphFile = "verbcl_graph.jsonl";
inline constexpr const char* kHighlightsFile = "verbcl_highlights.jsonl";
inline constexpr const char* kRejectsFile = "rejects.jsonl";
inline constexpr const char* kDropReportFile = "drop_report.json";

Json to_json(const VerbatimEdge& e);
Json to_json(const SentenceRecord& r);

struct RankingRecord {
  RankedSentences ranking;
  std::optional<std::string> ranker;
  std::optional<std::uint64_t> seed;
};
Json to_json(const RankingRecord& r);

Json to_json(const RankingMetrics& m);
Json to_json(const RougeScore& r);
Json to_json(const EvalReport& report);

VerbatimEdge edge_from_json(const Json& j, std::int64_t line);
SentenceRecord sentence_from_json(const Json& j, std::int64_t line);
RankingRecord ranking_from_json(const Json& j, std::int64_t line);

// Calls `on_record` for every non-blank line parsed as a JSON object.
void for_each_line(std::istream& in, const std::string& source,
                   const std::function<void(const Json&, std::int64_t)>& on_record);

std::vector<VerbatimEdge> read_edges(const std::string& path);
std::vector<SentenceRecord> read_sentences(const std::string& path);
std::vector<RankingRecord> read_rankings(const std::string& path);

void write_lines(const std::string& path, const std::vector<Json>& rows);
void write_json(const std::string& path, const Json& doc);

template <typename T>
void write_records(const std::string& path, const std::vector<T>& items) {
  std::vector<Json> rows;
  rows.reserve(items.size());
  for (const auto& item : items) rows.push_back(to_json(item));
  write_lines(path, rows);
}

// Checks the file against the graph-edge or highlight record schema
// and returns the number of records.
std::size_t validate_graph_file(const std::string& path);
std::size_t validate_highlights_file(const std::string& path);

}  // namespace quotegraph::records
