#include "quotegraph/audit.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include "quotegraph/error.hpp"

namespace quotegraph {

namespace {

using records::Json;

[[noreturn]] void schema_error(std::int64_t line, const std::string& what) {
  throw Error(ErrorKind::kSchema, "SchemaError", "line " + std::to_string(line) + ": " + what);
}

bool same_quote(const VerbatimEdge& a, const VerbatimEdge& b) {
  return a.citing_opinion_id == b.citing_opinion_id && a.cited_opinion_id == b.cited_opinion_id &&
         a.verbatim == b.verbatim && a.snippet == b.snippet && a.score == b.score;
}

std::string join_sentences(const Opinion& op, std::size_t first, std::size_t last) {
  std::string out;
  for (std::size_t s = first; s <= last; ++s) {
    if (!out.empty()) out += ' ';
    out += op.sentence(s);
  }
  return out;
}

std::set<std::string> token_set(std::string_view text) {
  std::set<std::string> out;
  for (Span w : tokenize_words(text)) {
    std::string t = normalize_token(slice(text, w));
    if (!t.empty()) out.insert(std::move(t));
  }
  return out;
}

std::string context_for(const Anchor& a, const Opinion& cited) {
  const auto n = static_cast<std::int64_t>(cited.sentence_count());
  if (n == 0) return {};
  if (!a.sentence_ids.empty()) {
    const std::int64_t lo = std::max<std::int64_t>(0, a.sentence_ids.front() - 1);
    const std::int64_t hi = std::min<std::int64_t>(n - 1, a.sentence_ids.back() + 1);
    if (lo > hi) return {};
    return join_sentences(cited, static_cast<std::size_t>(lo), static_cast<std::size_t>(hi));
  }
  const auto quote = token_set(a.record.verbatim);
  std::vector<std::pair<std::size_t, std::size_t>> overlap;  // (shared, sentence)
  for (std::size_t s = 0; s < cited.sentence_count(); ++s) {
    std::size_t shared = 0;
    for (const auto& t : token_set(cited.sentence(s))) shared += quote.count(t);
    overlap.emplace_back(shared, s);
  }
  std::stable_sort(overlap.begin(), overlap.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  overlap.resize(std::min<std::size_t>(3, overlap.size()));
  std::sort(overlap.begin(), overlap.end(),
            [](const auto& x, const auto& y) { return x.second < y.second; });
  std::string out;
  for (const auto& [shared, s] : overlap) {
    if (!out.empty()) out += " [...] ";
    out += cited.sentence(s);
  }
  return out;
}

}  // namespace

std::vector<Anchor> collect_anchors(const std::vector<VerbatimEdge>& edges,
                                    const std::vector<VerbatimEdge>& rejects) {
  std::vector<Anchor> out;
  for (const VerbatimEdge& e : edges) {
    if (out.empty() || !same_quote(out.back().record, e) ||
        e.sentence_id <= out.back().sentence_ids.back()) {
      out.push_back({e, {}, true});
    }
    out.back().sentence_ids.push_back(e.sentence_id);
  }
  for (const VerbatimEdge& r : rejects) out.push_back({r, {}, false});
  return out;
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k > n)
    throw Error(ErrorKind::kData, "NotEnoughRecords",
                "requested " + std::to_string(k) + " anchors but only " + std::to_string(n) +
                    " are available");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<AuditItem> audit_sample(const std::vector<VerbatimEdge>& edges,
                                    const std::vector<VerbatimEdge>& rejects, std::size_t k,
                                    std::uint64_t seed, const std::vector<Opinion>* corpus) {
  const auto anchors = collect_anchors(edges, rejects);
  std::vector<AuditItem> out;
  for (std::size_t idx : sample_indices(anchors.size(), k, seed)) {
    const Anchor& a = anchors[idx];
    AuditItem item;
    item.audit_id = static_cast<std::int64_t>(out.size());
    item.citing_opinion_id = a.record.citing_opinion_id;
    item.cited_opinion_id = a.record.cited_opinion_id;
    item.sentence_ids = a.sentence_ids;
    item.verbatim = a.record.verbatim;
    item.snippet = a.record.snippet;
    item.score = a.record.score;
    item.predicted = a.predicted;
    if (corpus != nullptr)
      if (const Opinion* cited = find_opinion(*corpus, a.record.cited_opinion_id))
        item.cited_text = context_for(a, *cited);
    out.push_back(std::move(item));
  }
  return out;
}

records::Json to_json(const AuditItem& item) {
  Json j;
  j["audit_id"] = item.audit_id;
  j["citing_opinion_id"] = item.citing_opinion_id;
  j["cited_opinion_id"] = item.cited_opinion_id;
  j["sentence_ids"] = item.sentence_ids;
  j["verbatim"] = item.verbatim;
  j["snippet"] = item.snippet;
  j["score"] = item.score;
  j["predicted"] = item.predicted;
  j["cited_text"] = item.cited_text ? Json(*item.cited_text) : Json(nullptr);
  j["gold"] = item.gold ? Json(*item.gold) : Json(nullptr);
  return j;
}

AuditItem audit_item_from_json(const records::Json& j, std::int64_t line) {
  static const std::set<std::string> kFields = {
      "audit_id", "citing_opinion_id", "cited_opinion_id", "sentence_ids", "verbatim",
      "snippet",  "score",             "predicted",        "cited_text",   "gold"};
  if (!j.is_object()) schema_error(line, "record is not an object");
  for (const auto& key : kFields)
    if (!j.contains(key)) schema_error(line, "missing field '" + key + "'");
  for (const auto& [key, value] : j.items())
    if (!kFields.count(key)) schema_error(line, "unexpected field '" + key + "'");
  auto need = [&](bool ok, const char* key, const char* type) {
    if (!ok) schema_error(line, std::string("field '") + key + "' must be " + type);
  };
  need(j["audit_id"].is_number_integer(), "audit_id", "an integer");
  need(j["citing_opinion_id"].is_number_integer(), "citing_opinion_id", "an integer");
  need(j["cited_opinion_id"].is_number_integer(), "cited_opinion_id", "an integer");
  need(j["sentence_ids"].is_array(), "sentence_ids", "an array");
  need(j["verbatim"].is_string(), "verbatim", "a string");
  need(j["snippet"].is_string(), "snippet", "a string");
  need(j["score"].is_number(), "score", "a number");
  need(j["predicted"].is_boolean(), "predicted", "a boolean");
  need(j["cited_text"].is_string() || j["cited_text"].is_null(), "cited_text", "a string or null");
  need(j["gold"].is_boolean() || j["gold"].is_null(), "gold", "a boolean or null");

  AuditItem item;
  item.audit_id = j["audit_id"].get<std::int64_t>();
  item.citing_opinion_id = j["citing_opinion_id"].get<std::int64_t>();
  item.cited_opinion_id = j["cited_opinion_id"].get<std::int64_t>();
  for (const Json& v : j["sentence_ids"]) {
    need(v.is_number_integer(), "sentence_ids", "an array of integers");
    item.sentence_ids.push_back(v.get<std::int64_t>());
  }
  item.verbatim = j["verbatim"].get<std::string>();
  item.snippet = j["snippet"].get<std::string>();
  item.score = j["score"].get<double>();
  item.predicted = j["predicted"].get<bool>();
  if (j["cited_text"].is_string()) item.cited_text = j["cited_text"].get<std::string>();
  if (j["gold"].is_boolean()) item.gold = j["gold"].get<bool>();
  return item;
}

std::vector<AuditItem> read_audit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "IoError", "cannot open " + path);
  std::vector<AuditItem> out;
  records::for_each_line(in, path, [&](const Json& j, std::int64_t line) {
    out.push_back(audit_item_from_json(j, line));
  });
  return out;
}

std::map<std::int64_t, bool> read_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "IoError", "cannot open " + path);
  std::map<std::int64_t, bool> out;
  records::for_each_line(in, path, [&](const Json& j, std::int64_t line) {
    if (!j.is_object() || j.size() != 2 || !j.contains("audit_id") || !j.contains("gold") ||
        !j["audit_id"].is_number_integer() || !j["gold"].is_boolean())
      schema_error(line, "expected {\"audit_id\": int, \"gold\": bool}");
    out[j["audit_id"].get<std::int64_t>()] = j["gold"].get<bool>();
  });
  return out;
}

AuditReport audit_score(const std::vector<AuditItem>& items,
                        const std::map<std::int64_t, bool>& labels) {
  std::vector<std::pair<bool, bool>> decisions;
  std::vector<std::int64_t> missing;
  for (const AuditItem& item : items) {
    std::optional<bool> gold = item.gold;
    if (auto it = labels.find(item.audit_id); !gold && it != labels.end()) gold = it->second;
    if (!gold) {
      missing.push_back(item.audit_id);
      continue;
    }
    decisions.emplace_back(item.predicted, *gold);
  }
  if (!missing.empty()) {
    std::string ids;
    for (std::int64_t id : missing) ids += (ids.empty() ? "" : ", ") + std::to_string(id);
    throw Error(ErrorKind::kData, "MissingLabels", "no gold label for audit ids: " + ids);
  }
  return score_decisions(decisions);
}

records::Json to_json(const AuditReport& report) {
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  auto cls = [&](const ClassMetrics& m) {
    return Json{{"precision", opt(m.precision)}, {"recall", opt(m.recall)}, {"support", m.support}};
  };
  return Json{{"anchors", report.true_positive + report.false_positive +
                              report.false_negative + report.true_negative},
              {"confusion",
               {{"true_positive", report.true_positive},
                {"false_positive", report.false_positive},
                {"false_negative", report.false_negative},
                {"true_negative", report.true_negative}}},
              {"positive", cls(report.positive)},
              {"negative", cls(report.negative)}};
}

}  // namespace quotegraph
