#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quotegraph/corpus.hpp"
#include "quotegraph/highlight.hpp"

namespace quotegraph {

// Directed citing -> cited multigraph. Nodes are indexed 0..n-1 in ascending
// opinion id order.
class CitationGraph {
 public:
  struct Arc {
    std::size_t from = 0;
    std::size_t to = 0;
    std::int64_t multiplicity = 0;
    // Cited sentence ids carried by the collapsed records, ascending.
    std::vector<std::int64_t> sentence_ids;
  };

  CitationGraph() = default;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t simple_edge_count() const { return arcs_.size(); }
  std::int64_t record_count() const { return record_count_; }
  std::int64_t dropped_self_loops() const { return dropped_self_loops_; }
  const std::vector<OpinionId>& nodes() const { return nodes_; }
  // Sorted by (from, to).
  const std::vector<Arc>& arcs() const { return arcs_; }
  std::optional<std::size_t> index_of(OpinionId id) const;

  // Distinct successors / predecessors of node v, ascending.
  const std::vector<std::size_t>& successors(std::size_t v) const { return out_[v]; }
  const std::vector<std::size_t>& predecessors(std::size_t v) const { return in_[v]; }

  // Multiplicity-weighted degrees.
  std::int64_t in_degree(std::size_t v) const { return in_weight_[v]; }
  std::int64_t out_degree(std::size_t v) const { return out_weight_[v]; }

  // Strongly connected components with more than one node, and how many
  // nodes they hold. Zero for an acyclic graph.
  std::size_t cyclic_components() const { return cyclic_components_; }
  std::size_t nodes_on_cycles() const { return nodes_on_cycles_; }

  friend CitationGraph build_graph(const std::vector<VerbatimEdge>& edges);
  friend CitationGraph graph_from_arcs(
      const std::vector<std::pair<OpinionId, OpinionId>>& arcs);

 private:
  void finish();

  std::vector<OpinionId> nodes_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<std::int64_t> in_weight_;
  std::vector<std::int64_t> out_weight_;
  std::int64_t record_count_ = 0;
  std::int64_t dropped_self_loops_ = 0;
  std::size_t cyclic_components_ = 0;
  std::size_t nodes_on_cycles_ = 0;
};

// Collapses parallel records into one arc with a multiplicity. Self-loops are
// dropped and counted.
CitationGraph build_graph(const std::vector<VerbatimEdge>& edges);

// Convenience for tests and generators: each pair is one record.
CitationGraph graph_from_arcs(const std::vector<std::pair<OpinionId, OpinionId>>& arcs);

enum class Direction { kIn, kOut };

// degree -> number of nodes with that degree.
std::map<std::int64_t, std::int64_t> degree_histogram(const CitationGraph& g, Direction d);

// simple_edge_count / (n (n - 1)). Throws DegenerateGraph when n < 2.
double density(const CitationGraph& g);
double density(std::int64_t nodes, std::int64_t simple_edges);

struct CentralityReport {
  enum class Method { kExact, kApproximate };
  Method method = Method::kExact;
  std::size_t pivots = 0;
  std::uint64_t seed = 0;
  // Aligned with CitationGraph::nodes().
  std::vector<double> values;
};

inline constexpr std::size_t kDefaultExactLimit = 5000;

// Directed, unnormalized betweenness over ordered pairs with endpoints
// excluded. Throws GraphTooLarge above `exact_limit` nodes.
CentralityReport betweenness_exact(const CitationGraph& g,
                                   std::size_t exact_limit = kDefaultExactLimit,
                                   int workers = 1);

// Dependency accumulation from k uniformly sampled sources, scaled by n / k.
CentralityReport betweenness_approx(const CitationGraph& g, std::size_t k,
                                    std::uint64_t seed, int workers = 1);

// Accumulates dependencies from the given source nodes and scales by
// n / |sources|. Sources are processed in ascending order.
std::vector<double> betweenness_from_sources(const CitationGraph& g,
                                             std::vector<std::size_t> sources,
                                             int workers = 1);

struct RankCorrelation {
  std::optional<double> kendall_tau_b;
  std::optional<double> spearman_rho;
};

// Tie-corrected Kendall tau and Spearman rho of two aligned value vectors.
// A coefficient is absent when one side is constant.
RankCorrelation rank_correlation(const std::vector<double>& a, const std::vector<double>& b);
RankCorrelation rank_correlation(const std::map<OpinionId, double>& a,
                                 const std::map<OpinionId, double>& b);

// Least-squares slope of log(count) against log(degree), degrees >= 1.
// Throws TooFewBuckets with fewer than three usable buckets.
double powerlaw_slope(const std::map<std::int64_t, std::int64_t>& hist);

}  // namespace quotegraph
