#include "quotegraph/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "quotegraph/error.hpp"

namespace quotegraph {

namespace {

using records::Json;

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

// Linear interpolation between closest ranks.
double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.size() == 1) return sorted.front();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Json degree_section(const CitationGraph& g, Direction d) {
  const auto hist = degree_histogram(g, d);
  Json buckets = Json::array();
  for (auto [degree, count] : hist) buckets.push_back({degree, count});

  Json slope = nullptr;
  try {
    slope = powerlaw_slope(hist);
  } catch (const Error& e) {
    if (e.code() != "TooFewBuckets") throw;
  }

  // Zipf reference c(d) = c(1) / d anchored at the degree-1 bucket.
  Json reference = Json::array();
  if (auto it = hist.find(1); it != hist.end())
    for (auto [degree, count] : hist)
      if (degree >= 1)
        reference.push_back({degree, static_cast<double>(it->second) / static_cast<double>(degree)});

  std::int64_t max_degree = hist.empty() ? 0 : hist.rbegin()->first;
  return Json{{"histogram", buckets},
              {"max_degree", max_degree},
              {"powerlaw_slope", slope},
              {"zipf_reference", reference}};
}

Json correlation_json(const RankCorrelation& rc) {
  return Json{{"kendall_tau_b", optional_number(rc.kendall_tau_b)},
              {"spearman_rho", optional_number(rc.spearman_rho)}};
}

Json centrality_section(const CitationGraph& g, const StatsOptions& opt) {
  const std::size_t n = g.node_count();
  CentralityReport report;
  if (n <= opt.exact_limit) {
    report = betweenness_exact(g, opt.exact_limit, opt.workers);
  } else {
    const std::size_t k = opt.pivots > 0 ? std::min(opt.pivots, n) : std::min<std::size_t>(n, 1000);
    report = betweenness_approx(g, k, opt.seed, opt.workers);
  }

  Json j;
  j["method"] = report.method == CentralityReport::Method::kExact ? "exact" : "approximate";
  if (report.method == CentralityReport::Method::kApproximate) {
    j["pivots"] = report.pivots;
    j["seed"] = report.seed;
  }
  if (n == 0) {
    j["summary"] = nullptr;
    return j;
  }

  std::vector<double> sorted = report.values;
  std::sort(sorted.begin(), sorted.end());
  const double mean =
      std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
  Json quantiles;
  for (double q : {0.25, 0.5, 0.75, 0.9, 0.99}) {
    char key[16];
    std::snprintf(key, sizeof key, "p%g", q * 100);
    quantiles[key] = quantile(sorted, q);
  }
  j["summary"] = {{"min", sorted.front()},
                  {"max", sorted.back()},
                  {"mean", mean},
                  {"quantiles", quantiles},
                  {"zero_nodes", std::count(sorted.begin(), sorted.end(), 0.0)}};

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return report.values[a] > report.values[b];
  });
  Json top = Json::array();
  for (std::size_t r = 0; r < std::min(opt.top_nodes, n); ++r)
    top.push_back({{"opinion_id", g.nodes()[idx[r]]},
                   {"betweenness", report.values[idx[r]]},
                   {"in_degree", g.in_degree(idx[r])},
                   {"out_degree", g.out_degree(idx[r])}});
  j["top_nodes"] = top;

  // Equal-width bins over [min, max].
  Json bins = Json::array();
  const double lo = sorted.front(), hi = sorted.back();
  const std::size_t nb = std::max<std::size_t>(1, opt.histogram_bins);
  std::vector<std::int64_t> counts(hi > lo ? nb : 1, 0);
  for (double v : sorted) {
    std::size_t b = hi > lo ? static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(nb)) : 0;
    counts[std::min(b, counts.size() - 1)]++;
  }
  const double width = hi > lo ? (hi - lo) / static_cast<double>(nb) : 0.0;
  for (std::size_t b = 0; b < counts.size(); ++b)
    bins.push_back({{"lower", lo + width * static_cast<double>(b)},
                    {"upper", counts.size() == 1 ? hi : lo + width * static_cast<double>(b + 1)},
                    {"count", counts[b]}});
  j["histogram"] = bins;

  std::vector<double> in_deg(n), out_deg(n);
  for (std::size_t v = 0; v < n; ++v) {
    in_deg[v] = static_cast<double>(g.in_degree(v));
    out_deg[v] = static_cast<double>(g.out_degree(v));
  }
  j["correlation_with_in_degree"] = correlation_json(rank_correlation(report.values, in_deg));
  j["correlation_with_out_degree"] = correlation_json(rank_correlation(report.values, out_deg));
  return j;
}

}  // namespace

records::Json graph_stats(const CitationGraph& g, const StatsOptions& options) {
  Json j;
  const auto n = static_cast<std::int64_t>(g.node_count());
  const auto e = static_cast<std::int64_t>(g.simple_edge_count());
  j["nodes"] = n;
  j["simple_edges"] = e;
  j["records"] = g.record_count();
  j["dropped_self_loops"] = g.dropped_self_loops();
  j["density"] = n >= 2 ? Json(density(n, e)) : Json(nullptr);
  j["in_degree"] = degree_section(g, Direction::kIn);
  j["out_degree"] = degree_section(g, Direction::kOut);
  j["centrality"] = centrality_section(g, options);
  j["cycles"] = {{"cyclic_components", g.cyclic_components()},
                 {"nodes_on_cycles", g.nodes_on_cycles()},
                 {"acyclic", g.cyclic_components() == 0}};
  return j;
}

records::Json highlight_stats(const std::vector<SentenceRecord>& records) {
  std::map<OpinionId, std::pair<std::int64_t, std::int64_t>> per;  // (highlighted, total)
  for (const SentenceRecord& r : records) {
    auto& [h, t] = per[r.opinion_id];
    ++t;
    if (r.highlight) ++h;
  }
  double sum = 0.0;
  std::int64_t highlighted = 0;
  for (const auto& [id, ht] : per) {
    sum += static_cast<double>(ht.first) / static_cast<double>(ht.second);
    highlighted += ht.first;
  }
  return Json{{"opinions", per.size()},
              {"sentences", records.size()},
              {"highlighted_sentences", highlighted},
              {"mean_highlight_fraction",
               per.empty() ? Json(nullptr) : Json(sum / static_cast<double>(per.size()))}};
}

}  // namespace quotegraph
