#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quotegraph/corpus.hpp"
#include "quotegraph/highlight.hpp"
#include "quotegraph/records.hpp"
#include "quotegraph/verbatim.hpp"

namespace quotegraph {

// One quotation decision: a run of graph records written for the same
// quote (one per aligned sentence), or a single reject.
struct Anchor {
  VerbatimEdge record;
  std::vector<std::int64_t> sentence_ids;  // empty for rejects
  bool predicted = false;
};

std::vector<Anchor> collect_anchors(const std::vector<VerbatimEdge>& edges,
                                    const std::vector<VerbatimEdge>& rejects);

struct AuditItem {
  std::int64_t audit_id = 0;
  OpinionId citing_opinion_id = 0;
  OpinionId cited_opinion_id = 0;
  std::vector<std::int64_t> sentence_ids;
  std::string verbatim;
  std::string snippet;
  double score = -1.0;
  bool predicted = false;
  std::optional<std::string> cited_text;
  std::optional<bool> gold;
};

// k distinct indices drawn uniformly from [0, n), ascending. Throws
// NotEnoughRecords when k > n.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed);

// Seeded uniform sample of k anchors. With a corpus, each item carries the
// cited sentences around the aligned range (or, for rejects, the three
// sentences sharing the most tokens with the quote).
std::vector<AuditItem> audit_sample(const std::vector<VerbatimEdge>& edges,
                                    const std::vector<VerbatimEdge>& rejects, std::size_t k,
                                    std::uint64_t seed,
                                    const std::vector<Opinion>* corpus = nullptr);

records::Json to_json(const AuditItem& item);
AuditItem audit_item_from_json(const records::Json& j, std::int64_t line);
std::vector<AuditItem> read_audit_file(const std::string& path);

// {"audit_id": int, "gold": bool} lines.
std::map<std::int64_t, bool> read_labels(const std::string& path);

// Gold comes from the item itself or, failing that, from `labels`. Throws
// MissingLabels naming every unlabeled audit id.
AuditReport audit_score(const std::vector<AuditItem>& items,
                        const std::map<std::int64_t, bool>& labels = {});

records::Json to_json(const AuditReport& report);

}  // namespace quotegraph
