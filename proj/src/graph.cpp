#include "quotegraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include "quotegraph/error.hpp"

namespace quotegraph {

namespace {

// Iterative Tarjan; returns the component id of every node.
std::vector<std::size_t> strongly_connected(const CitationGraph& g, std::size_t* count) {
  const std::size_t n = g.node_count();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t next_index = 0, components = 0;

  struct Frame {
    std::size_t v;
    std::size_t edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& succ = g.successors(f.v);
      if (f.edge < succ.size()) {
        std::size_t w = succ[f.edge++];
        if (index[w] == kUnset) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const std::size_t v = f.v;
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = components;
        } while (w != v);
        ++components;
      }
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }
  *count = components;
  return comp;
}

// Brandes single-source accumulation into `acc`.
struct SourceWorkspace {
  explicit SourceWorkspace(std::size_t n)
      : sigma(n), dist(n), delta(n), order() { order.reserve(n); }
  std::vector<double> sigma;
  std::vector<std::int64_t> dist;
  std::vector<double> delta;
  std::vector<std::size_t> order;
};

void accumulate_from(const CitationGraph& g, std::size_t s, SourceWorkspace& ws,
                     std::vector<double>& acc) {
  std::fill(ws.sigma.begin(), ws.sigma.end(), 0.0);
  std::fill(ws.dist.begin(), ws.dist.end(), -1);
  std::fill(ws.delta.begin(), ws.delta.end(), 0.0);
  ws.order.clear();
  ws.sigma[s] = 1.0;
  ws.dist[s] = 0;
  ws.order.push_back(s);
  for (std::size_t head = 0; head < ws.order.size(); ++head) {
    std::size_t v = ws.order[head];
    for (std::size_t w : g.successors(v)) {
      if (ws.dist[w] < 0) {
        ws.dist[w] = ws.dist[v] + 1;
        ws.order.push_back(w);
      }
      if (ws.dist[w] == ws.dist[v] + 1) ws.sigma[w] += ws.sigma[v];
    }
  }
  for (auto it = ws.order.rbegin(); it != ws.order.rend(); ++it) {
    std::size_t w = *it;
    for (std::size_t v : g.predecessors(w)) {
      if (ws.dist[v] >= 0 && ws.dist[v] + 1 == ws.dist[w])
        ws.delta[v] += ws.sigma[v] / ws.sigma[w] * (1.0 + ws.delta[w]);
    }
    if (w != s) acc[w] += ws.delta[w];
  }
}

std::vector<double> average_ranks(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
    double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

// Sum over tie groups of t(t-1)/2 in a sorted range, compared with `same`.
template <typename It, typename Same>
std::int64_t tied_pairs(It begin, It end, Same same) {
  std::int64_t total = 0;
  for (It i = begin; i != end;) {
    It j = i;
    std::int64_t t = 0;
    while (j != end && same(*i, *j)) {
      ++j;
      ++t;
    }
    total += t * (t - 1) / 2;
    i = j;
  }
  return total;
}

// Stable merge sort on `v`, returning the number of inversions.
std::int64_t count_inversions(std::vector<double>& v, std::vector<double>& buf,
                              std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t inv = count_inversions(v, buf, lo, mid) + count_inversions(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      inv += static_cast<std::int64_t>(mid - i);
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
            buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

// Knight's O(n log n) tau-b.
std::optional<double> kendall_tau_b(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  std::vector<std::pair<double, double>> pairs(n);
  for (std::size_t i = 0; i < n; ++i) pairs[i] = {a[i], b[i]};
  std::sort(pairs.begin(), pairs.end());
  const auto n0 = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  const std::int64_t ties_a =
      tied_pairs(pairs.begin(), pairs.end(), [](auto& x, auto& y) { return x.first == y.first; });
  const std::int64_t ties_joint =
      tied_pairs(pairs.begin(), pairs.end(), [](auto& x, auto& y) { return x == y; });
  std::vector<double> bs(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) bs[i] = pairs[i].second;
  const std::int64_t swaps = count_inversions(bs, buf, 0, n);
  const std::int64_t ties_b =
      tied_pairs(bs.begin(), bs.end(), [](double x, double y) { return x == y; });
  const double denom = std::sqrt(static_cast<double>(n0 - ties_a) * static_cast<double>(n0 - ties_b));
  if (denom == 0.0) return std::nullopt;
  const double numer =
      static_cast<double>(n0 - ties_a - ties_b + ties_joint) - 2.0 * static_cast<double>(swaps);
  return numer / denom;
}

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

std::optional<std::size_t> CitationGraph::index_of(OpinionId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

void CitationGraph::finish() {
  const std::size_t n = nodes_.size();
  out_.assign(n, {});
  in_.assign(n, {});
  in_weight_.assign(n, 0);
  out_weight_.assign(n, 0);
  for (const Arc& a : arcs_) {
    out_[a.from].push_back(a.to);
    in_[a.to].push_back(a.from);
    out_weight_[a.from] += a.multiplicity;
    in_weight_[a.to] += a.multiplicity;
  }
  for (auto& list : in_) std::sort(list.begin(), list.end());
  std::size_t components = 0;
  auto comp = strongly_connected(*this, &components);
  std::vector<std::size_t> sizes(components, 0);
  for (std::size_t c : comp) ++sizes[c];
  cyclic_components_ = 0;
  nodes_on_cycles_ = 0;
  for (std::size_t s : sizes) {
    if (s > 1) {
      ++cyclic_components_;
      nodes_on_cycles_ += s;
    }
  }
}

CitationGraph build_graph(const std::vector<VerbatimEdge>& edges) {
  CitationGraph g;
  std::vector<std::tuple<OpinionId, OpinionId, std::int64_t>> records;
  records.reserve(edges.size());
  for (const VerbatimEdge& e : edges) {
    if (e.citing_opinion_id == e.cited_opinion_id) {
      ++g.dropped_self_loops_;
      continue;
    }
    records.emplace_back(e.citing_opinion_id, e.cited_opinion_id, e.sentence_id);
    g.nodes_.push_back(e.citing_opinion_id);
    g.nodes_.push_back(e.cited_opinion_id);
  }
  std::sort(g.nodes_.begin(), g.nodes_.end());
  g.nodes_.erase(std::unique(g.nodes_.begin(), g.nodes_.end()), g.nodes_.end());
  std::sort(records.begin(), records.end());
  g.record_count_ = static_cast<std::int64_t>(records.size());
  for (const auto& [from, to, sentence] : records) {
    std::size_t f = *g.index_of(from), t = *g.index_of(to);
    if (g.arcs_.empty() || g.arcs_.back().from != f || g.arcs_.back().to != t)
      g.arcs_.push_back({f, t, 0, {}});
    ++g.arcs_.back().multiplicity;
    g.arcs_.back().sentence_ids.push_back(sentence);
  }
  g.finish();
  return g;
}

CitationGraph graph_from_arcs(const std::vector<std::pair<OpinionId, OpinionId>>& arcs) {
  std::vector<VerbatimEdge> edges;
  edges.reserve(arcs.size());
  for (auto [from, to] : arcs) edges.push_back({from, to, 0, "", "", 1.0});
  return build_graph(edges);
}

std::map<std::int64_t, std::int64_t> degree_histogram(const CitationGraph& g, Direction d) {
  std::map<std::int64_t, std::int64_t> hist;
  for (std::size_t v = 0; v < g.node_count(); ++v)
    ++hist[d == Direction::kIn ? g.in_degree(v) : g.out_degree(v)];
  return hist;
}

double density(std::int64_t nodes, std::int64_t simple_edges) {
  if (nodes < 2)
    throw Error(ErrorKind::kPrecondition, "DegenerateGraph", "density needs at least two nodes");
  const double n = static_cast<double>(nodes);
  return static_cast<double>(simple_edges) / (n * (n - 1.0));
}

double density(const CitationGraph& g) {
  return density(static_cast<std::int64_t>(g.node_count()),
                 static_cast<std::int64_t>(g.simple_edge_count()));
}

std::vector<double> betweenness_from_sources(const CitationGraph& g,
                                             std::vector<std::size_t> sources,
                                             int workers) {
  const std::size_t n = g.node_count();
  std::vector<double> total(n, 0.0);
  if (sources.empty()) return total;
  std::sort(sources.begin(), sources.end());
  const std::size_t k = sources.size();
  // Sources are summed in fixed blocks, and blocks in order, so the result
  // does not depend on the worker count.
  constexpr std::size_t kBlock = 64;
  const std::size_t blocks = (k + kBlock - 1) / kBlock;
  const std::size_t threads = std::max<std::size_t>(
      1, std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), blocks));
  std::vector<std::vector<double>> partial(threads, std::vector<double>(n, 0.0));
  std::vector<SourceWorkspace> spaces;
  spaces.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) spaces.emplace_back(n);
  auto run = [&](std::size_t t, std::size_t block) {
    std::fill(partial[t].begin(), partial[t].end(), 0.0);
    for (std::size_t i = block * kBlock; i < std::min(k, (block + 1) * kBlock); ++i)
      accumulate_from(g, sources[i], spaces[t], partial[t]);
  };
  for (std::size_t wave = 0; wave < blocks; wave += threads) {
    const std::size_t active = std::min(threads, blocks - wave);
    if (active == 1) {
      run(0, wave);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < active; ++t) pool.emplace_back(run, t, wave + t);
      for (auto& th : pool) th.join();
    }
    for (std::size_t t = 0; t < active; ++t)
      for (std::size_t v = 0; v < n; ++v) total[v] += partial[t][v];
  }
  const double scale = static_cast<double>(n) / static_cast<double>(k);
  if (scale != 1.0)
    for (double& v : total) v *= scale;
  return total;
}

CentralityReport betweenness_exact(const CitationGraph& g, std::size_t exact_limit,
                                   int workers) {
  if (g.node_count() > exact_limit)
    throw Error(ErrorKind::kPrecondition, "GraphTooLarge",
                std::to_string(g.node_count()) + " nodes exceed the exact-mode limit of " +
                    std::to_string(exact_limit));
  std::vector<std::size_t> all(g.node_count());
  std::iota(all.begin(), all.end(), 0);
  CentralityReport r;
  r.method = CentralityReport::Method::kExact;
  r.pivots = g.node_count();
  r.values = betweenness_from_sources(g, std::move(all), workers);
  return r;
}

CentralityReport betweenness_approx(const CitationGraph& g, std::size_t k, std::uint64_t seed,
                                    int workers) {
  const std::size_t n = g.node_count();
  if (k < 1 || k > n)
    throw Error(ErrorKind::kPrecondition, "InvalidPivotCount",
                "pivot count must be in [1, " + std::to_string(n) + "]");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first k slots are a uniform k-subset.
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  CentralityReport r;
  r.method = CentralityReport::Method::kApproximate;
  r.pivots = k;
  r.seed = seed;
  r.values = betweenness_from_sources(g, std::move(pool), workers);
  return r;
}

RankCorrelation rank_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw Error(ErrorKind::kPrecondition, "InvalidRankings",
                "rank correlation needs two aligned vectors of length >= 2");
  RankCorrelation r;
  r.kendall_tau_b = kendall_tau_b(a, b);
  r.spearman_rho = pearson(average_ranks(a), average_ranks(b));
  return r;
}

RankCorrelation rank_correlation(const std::map<OpinionId, double>& a,
                                 const std::map<OpinionId, double>& b) {
  if (a.size() != b.size())
    throw Error(ErrorKind::kPrecondition, "InvalidRankings", "key sets differ");
  std::vector<double> va, vb;
  va.reserve(a.size());
  vb.reserve(b.size());
  auto ib = b.begin();
  for (const auto& [key, value] : a) {
    if (ib->first != key)
      throw Error(ErrorKind::kPrecondition, "InvalidRankings", "key sets differ");
    va.push_back(value);
    vb.push_back((ib++)->second);
  }
  return rank_correlation(va, vb);
}

double powerlaw_slope(const std::map<std::int64_t, std::int64_t>& hist) {
  std::vector<double> xs, ys;
  for (auto [degree, count] : hist) {
    if (degree < 1 || count < 1) continue;
    xs.push_back(std::log(static_cast<double>(degree)));
    ys.push_back(std::log(static_cast<double>(count)));
  }
  if (xs.size() < 3)
    throw Error(ErrorKind::kPrecondition, "TooFewBuckets",
                "power-law fit needs at least three non-empty degree buckets");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace quotegraph
