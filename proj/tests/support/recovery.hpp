#pragma once

#include <set>
#include <tuple>
#include <vector>

#include "quotegraph/highlight.hpp"
#include "quotegraph/synth.hpp"

namespace fixtures {

struct Recovery {
  std::size_t truth = 0;
  std::size_t predicted = 0;
  std::size_t hits = 0;
  double precision() const { return predicted ? static_cast<double>(hits) / predicted : 0.0; }
  double recall() const { return truth ? static_cast<double>(hits) / truth : 0.0; }
};

// Compares (citing, cited, sentence) triples of emitted edges with the
// planted ground truth.
inline Recovery recovery(const std::vector<quotegraph::VerbatimEdge>& edges,
                         const std::vector<quotegraph::synth::PlantedCitation>& truth) {
  using Triple = std::tuple<std::int64_t, std::int64_t, std::int64_t>;
  std::set<Triple> expected, got;
  for (const auto& p : truth)
    for (auto s : p.sentence_ids) expected.emplace(p.citing_opinion_id, p.cited_opinion_id, s);
  for (const auto& e : edges) got.emplace(e.citing_opinion_id, e.cited_opinion_id, e.sentence_id);
  Recovery r;
  r.truth = expected.size();
  r.predicted = got.size();
  for (const auto& t : got) r.hits += expected.count(t);
  return r;
}

}  // namespace fixtures
