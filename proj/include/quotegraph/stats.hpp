#pragma once

#include <cstddef>
#include <cstdint>

#include "quotegraph/graph.hpp"
#include "quotegraph/records.hpp"

namespace quotegraph {

struct StatsOptions {
  std::size_t exact_limit = kDefaultExactLimit;
  std::size_t pivots = 0;  // 0: min(n, 1000)
  std::uint64_t seed = 0;
  int workers = 1;
  std::size_t top_nodes = 10;
  std::size_t histogram_bins = 20;
};

// Plot-ready graph report: counts, density, degree histograms with power-law
// slopes, betweenness summary, rank correlations and cycle census.
records::Json graph_stats(const CitationGraph& g, const StatsOptions& options = {});

// Per-opinion highlight fraction summary over sentence records.
records::Json highlight_stats(const std::vector<SentenceRecord>& records);

}  // namespace quotegraph
