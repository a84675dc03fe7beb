// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any
// criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "support/oracles.hpp"
#include "support/recovery.hpp"

#include "quotegraph/corpus.hpp"
#include "quotegraph/evalkit.hpp"
#include "quotegraph/graph.hpp"
#include "quotegraph/pipeline.hpp"
#include "quotegraph/records.hpp"
#include "quotegraph/synth.hpp"
#include "quotegraph/verbatim.hpp"

using namespace quotegraph;
namespace fs = std::filesystem;

namespace {

const std::string kCorpus = std::string(QG_DATA_DIR) + "/mini_corpus.jsonl";
const std::string kTruth = std::string(QG_DATA_DIR) + "/mini_corpus_truth.jsonl";

int failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  if (!ok) ++failures;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Opinion plain(OpinionId id, const std::string& text) {
  return *parse_document({id, "<p>" + text + "</p>"});
}

void planted_recovery() {
  const auto t0 = std::chrono::steady_clock::now();
  PipelineConfig cfg;
  cfg.input = kCorpus;
  const PipelineOutput out = run_pipeline_on_file(cfg);
  const double secs = seconds_since(t0);
  const auto rec = fixtures::recovery(out.edges, synth::read_truth(kTruth));
  report("planted-quote recovery",
         rec.precision() >= 0.95 && rec.recall() >= 0.95 && secs < 30.0,
         fmt("P=%.4f R=%.4f (need >= 0.95) over %zu planted edges, %.2f s (limit 30 s)",
             rec.precision(), rec.recall(), rec.truth, secs));
}

void matcher_oracle() {
  std::mt19937_64 rng(2024);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const std::vector<std::string> vocab = {
      "court", "held", "duty", "land", "owner", "tenant", "lease", "claim", "notice", "invitee",
      "premises", "assault", "party", "third", "special", "relation", "statute", "appeal",
      "reverse", "affirm", "record", "trial", "jury", "verdict", "damages", "contract", "breach",
      "remedy", "equity", "courts", "holds", "owners", "tenants", "claims", "notices", "of",
      "the", "a", "to", "in"};
  int agree = 0;
  const int pairs = 500;
  for (int trial = 0; trial < pairs; ++trial) {
    const std::size_t len = 30 + pick(471);
    std::vector<std::string> words;
    for (std::size_t k = 0; k < len; ++k) words.push_back(vocab[pick(vocab.size())]);
    std::string cited;
    for (const auto& w : words) cited += w + " ";
    std::string quote;
    const std::size_t qlen = 5 + pick(26);
    const std::size_t start = pick(len);
    const bool unrelated = pick(4) == 0;
    std::size_t pos = start;
    for (std::size_t k = 0; k < qlen; ++k) {
      const std::size_t action = pick(12);
      if (unrelated || action == 0) {
        quote += vocab[pick(vocab.size())] + " ";
      } else if (action == 1) {
        quote += "... ";
        pos += 1 + pick(12);
        quote += words[pos % len] + " ";
      } else if (action == 2) {
        pos += 1 + pick(10);
        quote += words[pos % len] + " ";
      } else {
        quote += words[pos % len] + " ";
      }
      ++pos;
    }
    const MatchResult r = qualify(quote, plain(1, cited), {});
    const oracle::Alignment o = oracle::align(quote, cited, {});
    const bool same = r.status == MatchStatus::kTooShort ? o.too_short : r.matched == o.feasible;
    agree += same;
  }
  int exact_ok = 0;
  const int exact_pairs = 200;
  for (int trial = 0; trial < exact_pairs; ++trial) {
    const std::size_t len = 40 + pick(461);
    std::vector<std::string> words;
    for (std::size_t k = 0; k < len; ++k) words.push_back(vocab[pick(vocab.size())]);
    std::string cited, quote;
    for (const auto& w : words) cited += w + " ";
    const std::size_t qlen = 5 + pick(26);
    const std::size_t start = pick(len - qlen);
    for (std::size_t k = start; k < start + qlen; ++k) quote += words[k] + " ";
    const MatchResult r = qualify(quote, plain(1, cited), {});
    exact_ok += r.matched && r.score == 1.0;
  }
  const double rate = static_cast<double>(agree) / pairs;
  report("matcher-oracle agreement", rate >= 0.98 && exact_ok == exact_pairs,
         fmt("%d/%d pairs agree (%.4f, need >= 0.98); exact substrings scoring 1.0: %d/%d", agree,
             pairs, rate, exact_ok, exact_pairs));
}

void metric_oracle() {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 50)(rng);
    std::vector<std::int64_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::set<std::int64_t> rel;
    for (int s = 0; s < n; ++s)
      if (std::bernoulli_distribution(0.25)(rng)) rel.insert(s);
    if (rel.empty()) rel.insert(std::uniform_int_distribution<int>(0, n - 1)(rng));
    const auto m = ranking_metrics(order, rel);
    const auto o = oracle::ranking_metrics(order, rel);
    worst = std::max({worst, std::abs(m.p_at_1 - o.p_at_1), std::abs(m.p_at_r - o.p_at_r),
                      std::abs(m.average_precision - o.ap), std::abs(m.reciprocal_rank - o.rr)});
  }
  const auto hyp = metric_tokens("the cat sat"), ref = metric_tokens("the cat ran");
  const auto r1 = rouge_n(hyp, ref, 1), r2 = rouge_n(hyp, ref, 2), rl = rouge_l(hyp, ref);
  const auto id = rouge_n(hyp, hyp, 1);
  const auto disjoint = rouge_l(metric_tokens("a b"), metric_tokens("c d"));
  const bool rouge_ok = r1.precision == 2.0 / 3 && r1.recall == 2.0 / 3 &&
                        std::abs(r1.f1 - 2.0 / 3) < 1e-15 && r2.precision == 0.5 &&
                        r2.recall == 0.5 && r2.f1 == 0.5 && rl.precision == 2.0 / 3 &&
                        rl.recall == 2.0 / 3 && std::abs(rl.f1 - 2.0 / 3) < 1e-15 &&
                        id.f1 == 1.0 && disjoint.f1 == 0.0;
  report("metric oracle equivalence", worst <= 1e-12 && rouge_ok,
         fmt("max |delta| over 1000 rankings = %.3g (limit 1e-12); ROUGE examples %s", worst,
             rouge_ok ? "exact" : "WRONG"));
}

void betweenness_checks() {
  using Arcs = std::vector<std::pair<OpinionId, OpinionId>>;
  auto exact = [](const Arcs& a) { return betweenness_exact(graph_from_arcs(a)).values; };
  Arcs star;
  for (int leaf = 1; leaf <= 5; ++leaf) star.emplace_back(leaf, 0);
  bool hand = exact({{1, 2}, {2, 3}}) == std::vector<double>{0, 1, 0};
  hand = hand && exact(star) == std::vector<double>(6, 0.0);
  hand = hand && exact({{1, 0}, {2, 0}, {0, 3}, {0, 4}}) == std::vector<double>{4, 0, 0, 0, 0};
  hand = hand && exact({{0, 1}, {1, 2}, {2, 3}, {3, 0}}) == std::vector<double>(4, 3.0);

  auto er = [](int n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    Arcs arcs;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (u != v && coin(rng)) arcs.emplace_back(u, v);
    return graph_from_arcs(arcs);
  };
  const auto small = er(80, 0.04, 1);
  const bool full_equal =
      betweenness_approx(small, small.node_count(), 3).values == betweenness_exact(small).values;

  const auto t0 = std::chrono::steady_clock::now();
  double rho_sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto g = er(300, 0.02, seed);
    const auto ex = betweenness_exact(g).values;
    const auto ap = betweenness_approx(g, 60, seed).values;
    rho_sum += rank_correlation(ap, ex).spearman_rho.value_or(0.0);
  }
  const double secs = seconds_since(t0);
  const double rho = rho_sum / 5.0;
  report("betweenness", hand && full_equal && rho >= 0.9 && secs < 10.0,
         std::string("hand-enumerated path/star/4-cycle ") + (hand ? "match" : "DIFFER") +
             "; approx(k=n) " + (full_equal ? "equals" : "DIFFERS FROM") + " exact; " +
             fmt("mean Spearman rho over 5 seeds = %.4f (need >= 0.9), %.2f s (limit 10 s)", rho,
                 secs));
}

void reference_formulas() {
  const double d = density(1493561, 4002137);
  std::map<std::int64_t, std::int64_t> zipf;
  for (int k = 1; k <= 100; ++k) zipf[k] = std::llround(1e6 / k);
  const double slope = powerlaw_slope(zipf);
  report("reference formula checks",
         std::abs(d - 1.79e-6) <= 0.01e-6 && std::abs(slope + 1.0) <= 0.01,
         fmt("density = %.4g (1.79e-6 +/- 0.01e-6); 1/d slope = %.5f (-1 +/- 0.01)", d, slope));
}

void baseline_ordering() {
  const auto central = synth::make_central_corpus();
  DropReport drops;
  const auto corpus = parse_corpus(central.documents, &drops);
  std::map<OpinionId, std::vector<SentenceRecord>> gold;
  for (const Opinion& op : corpus) {
    const auto& hl = central.highlights.at(op.opinion_id);
    for (std::size_t s = 0; s < op.sentence_count(); ++s) {
      const bool h = std::find(hl.begin(), hl.end(), static_cast<std::int64_t>(s)) != hl.end();
      gold[op.opinion_id].push_back({op.opinion_id, static_cast<std::int64_t>(s),
                                     std::string(op.sentence(s)), h, h ? 1 : 0});
    }
  }
  std::vector<RankedSentences> tr;
  for (const Opinion& op : corpus) tr.push_back(textrank_rank(op));
  const double tr_map = evaluate(tr, gold).mean_ranking.average_precision;
  double random_map = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<RankedSentences> rr;
    for (const Opinion& op : corpus) rr.push_back(random_rank(op, seed));
    random_map += evaluate(rr, gold).mean_ranking.average_precision;
  }
  random_map /= 20.0;
  report("baseline ordering", tr_map > random_map,
         fmt("TextRank MAP = %.4f, random MAP over 20 seeds = %.4f (%zu opinions)", tr_map,
             random_map, corpus.size()));
}

void determinism_and_schema() {
  const fs::path base = fs::temp_directory_path() / "qg_acceptance";
  fs::remove_all(base);
  const std::vector<std::string> files = {records::kGraphFile, records::kHighlightsFile,
                                          records::kRejectsFile, records::kDropReportFile};
  for (const char* run : {"a", "b"}) {
    PipelineConfig cfg;
    cfg.input = kCorpus;
    cfg.output_dir = (base / run).string();
    write_pipeline_outputs(run_pipeline_on_file(cfg), cfg);
  }
  bool identical = true;
  for (const auto& f : files) identical = identical && slurp(base / "a" / f) == slurp(base / "b" / f);
  std::string schema = "valid";
  std::size_t edges = 0, sentences = 0, rejects = 0;
  try {
    edges = records::validate_graph_file((base / "a" / records::kGraphFile).string());
    sentences = records::validate_highlights_file((base / "a" / records::kHighlightsFile).string());
    rejects = records::read_edges((base / "a" / records::kRejectsFile).string()).size();
  } catch (const std::exception& e) {
    schema = e.what();
  }
  fs::remove_all(base);
  report("determinism and schema", identical && schema == "valid" && edges > 0 && sentences > 0,
         std::string(identical ? "two runs byte-identical" : "runs DIFFER") + "; schema " + schema +
             fmt(" (%zu graph, %zu highlight, %zu reject records)", edges, sentences, rejects));
}

}  // namespace

int main() {
  planted_recovery();
  matcher_oracle();
  metric_oracle();
  betweenness_checks();
  reference_formulas();
  baseline_ordering();
  determinism_and_schema();
  return failures == 0 ? 0 : 1;
}
