#include "quotegraph/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include "quotegraph/error.hpp"

namespace quotegraph {

namespace {

RougeScore make_score(double overlap, double hyp_total, double ref_total) {
  RougeScore s;
  if (hyp_total <= 0.0 || ref_total <= 0.0) return s;
  s.precision = overlap / hyp_total;
  s.recall = overlap / ref_total;
  if (s.precision + s.recall > 0.0)
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

std::map<std::vector<std::string>, int> ngram_counts(const std::vector<std::string>& tokens,
                                                     std::size_t n) {
  std::map<std::vector<std::string>, int> counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i)
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  return counts;
}

std::int64_t word_count(std::string_view text) {
  return static_cast<std::int64_t>(tokenize_words(text).size());
}

}  // namespace

RankingMetrics ranking_metrics(const std::vector<std::int64_t>& order,
                               const std::set<std::int64_t>& relevant) {
  if (relevant.empty())
    throw Error(ErrorKind::kData, "NoRelevant", "opinion has no relevant sentences");
  RankingMetrics m;
  const std::size_t r = relevant.size();
  std::size_t hits = 0, hits_at_r = 0;
  double precision_sum = 0.0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (relevant.count(order[rank]) == 0) continue;
    ++hits;
    if (hits == 1) m.reciprocal_rank = 1.0 / static_cast<double>(rank + 1);
    if (rank == 0) m.p_at_1 = 1.0;
    if (rank < r) ++hits_at_r;
    precision_sum += static_cast<double>(hits) / static_cast<double>(rank + 1);
  }
  const std::size_t cutoff = std::min(r, order.size());
  m.p_at_r = cutoff == 0 ? 0.0 : static_cast<double>(hits_at_r) / static_cast<double>(cutoff);
  m.average_precision = precision_sum / static_cast<double>(r);
  return m;
}

RougeScore rouge_n(const std::vector<std::string>& hyp, const std::vector<std::string>& ref,
                   int n) {
  if (n < 1) throw Error(ErrorKind::kPrecondition, "InvalidOrder", "ROUGE-N needs n >= 1");
  const auto un = static_cast<std::size_t>(n);
  if (hyp.size() < un || ref.size() < un) return {};
  auto hyp_counts = ngram_counts(hyp, un);
  auto ref_counts = ngram_counts(ref, un);
  double overlap = 0.0;
  for (const auto& [gram, count] : hyp_counts) {
    auto it = ref_counts.find(gram);
    if (it != ref_counts.end()) overlap += std::min(count, it->second);
  }
  return make_score(overlap, static_cast<double>(hyp.size() - un + 1),
                    static_cast<double>(ref.size() - un + 1));
}

RougeScore rouge_l(const std::vector<std::string>& hyp, const std::vector<std::string>& ref) {
  if (hyp.empty() || ref.empty()) return {};
  std::vector<std::size_t> prev(ref.size() + 1, 0), cur(ref.size() + 1, 0);
  for (std::size_t i = 1; i <= hyp.size(); ++i) {
    for (std::size_t j = 1; j <= ref.size(); ++j)
      cur[j] = hyp[i - 1] == ref[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return make_score(static_cast<double>(prev[ref.size()]), static_cast<double>(hyp.size()),
                    static_cast<double>(ref.size()));
}

std::vector<std::string> metric_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (const Span& w : tokenize_words(text)) {
    std::string norm = normalize_token(slice(text, w));
    if (!norm.empty()) out.push_back(std::move(norm));
  }
  return out;
}

RankedSentences rank_by_scores(OpinionId id, const std::vector<double>& scores) {
  RankedSentences r;
  r.opinion_id = id;
  r.order.resize(scores.size());
  std::iota(r.order.begin(), r.order.end(), 0);
  std::stable_sort(r.order.begin(), r.order.end(), [&](std::int64_t a, std::int64_t b) {
    return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
  });
  r.scores.reserve(scores.size());
  for (std::int64_t i : r.order) r.scores.push_back(scores[static_cast<std::size_t>(i)]);
  return r;
}

RankedSentences textrank_sentences(const std::vector<std::string>& sentences,
                                   const TextRankConfig& cfg) {
  const std::size_t n = sentences.size();
  if (n == 0) return {};
  std::unordered_map<std::string, std::size_t> vocab;
  std::vector<std::vector<std::size_t>> types(n);
  std::vector<double> lengths(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto tokens = metric_tokens(sentences[i]);
    lengths[i] = static_cast<double>(tokens.size());
    for (auto& t : tokens) types[i].push_back(vocab.try_emplace(t, vocab.size()).first->second);
    std::sort(types[i].begin(), types[i].end());
    types[i].erase(std::unique(types[i].begin(), types[i].end()), types[i].end());
  }
  std::vector<double> sim(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double denom = std::log1p(lengths[i]) + std::log1p(lengths[j]);
      if (denom <= 0.0) continue;
      std::size_t shared = 0;
      auto a = types[i].begin(), b = types[j].begin();
      while (a != types[i].end() && b != types[j].end()) {
        if (*a < *b) ++a;
        else if (*b < *a) ++b;
        else {
          ++shared;
          ++a;
          ++b;
        }
      }
      sim[i * n + j] = sim[j * n + i] = static_cast<double>(shared) / denom;
    }
  }
  std::vector<double> out_weight(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out_weight[i] += sim[i * n + j];

  const double nd = static_cast<double>(n);
  std::vector<double> rank(n, 1.0 / nd), next(n);
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    double dangling = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (out_weight[j] == 0.0) dangling += rank[j];
    for (std::size_t i = 0; i < n; ++i) {
      double incoming = dangling / nd;
      for (std::size_t j = 0; j < n; ++j)
        if (out_weight[j] > 0.0) incoming += sim[j * n + i] / out_weight[j] * rank[j];
      next[i] = (1.0 - cfg.damping) / nd + cfg.damping * incoming;
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - rank[i]);
    std::swap(rank, next);
    if (change < cfg.tolerance) break;
  }
  const double total = std::accumulate(rank.begin(), rank.end(), 0.0);
  for (double& v : rank) v /= total;
  return rank_by_scores(0, rank);
}

RankedSentences textrank_rank(const Opinion& opinion, const TextRankConfig& cfg) {
  std::vector<std::string> sentences;
  sentences.reserve(opinion.sentence_count());
  for (std::size_t s = 0; s < opinion.sentence_count(); ++s)
    sentences.emplace_back(opinion.sentence(s));
  RankedSentences r = textrank_sentences(sentences, cfg);
  r.opinion_id = opinion.opinion_id;
  return r;
}

RankedSentences position_rank(const Opinion& opinion) {
  const std::size_t n = opinion.sentence_count();
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) scores[i] = static_cast<double>(n - i);
  return rank_by_scores(opinion.opinion_id, scores);
}

RankedSentences random_rank(const Opinion& opinion, std::uint64_t seed) {
  const std::size_t n = opinion.sentence_count();
  const auto id = static_cast<std::uint64_t>(opinion.opinion_id);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32)};
  std::mt19937_64 rng(seq);
  RankedSentences r;
  r.opinion_id = opinion.opinion_id;
  r.order.resize(n);
  std::iota(r.order.begin(), r.order.end(), 0);
  std::shuffle(r.order.begin(), r.order.end(), rng);
  for (std::size_t i = 0; i < n; ++i) r.scores.push_back(static_cast<double>(n - i));
  return r;
}

std::size_t sentences_within(const std::vector<SentenceRecord>& sentences,
                             std::int64_t word_limit) {
  std::int64_t words = 0;
  std::size_t k = 0;
  for (const SentenceRecord& s : sentences) {
    words += word_count(s.raw_text);
    if (words > word_limit) break;
    ++k;
  }
  return k;
}

std::size_t sentences_within(const Opinion& opinion, std::int64_t word_limit) {
  std::size_t k = 0;
  for (const auto& [first, last] : opinion.sentence_words) {
    if (static_cast<std::int64_t>(last) > word_limit) break;
    ++k;
  }
  return k;
}

std::set<OpinionId> filter_test_set(
    const std::map<OpinionId, std::vector<SentenceRecord>>& records, std::int64_t word_limit) {
  if (word_limit < 1)
    throw Error(ErrorKind::kUsage, "InvalidWordLimit", "word limit must be >= 1");
  std::set<OpinionId> kept;
  for (const auto& [id, sentences] : records) {
    const std::size_t k = sentences_within(sentences, word_limit);
    for (std::size_t s = 0; s < k; ++s) {
      if (sentences[s].highlight) {
        kept.insert(id);
        break;
      }
    }
  }
  return kept;
}

std::map<OpinionId, std::vector<SentenceRecord>> group_by_opinion(
    std::vector<SentenceRecord> records) {
  std::map<OpinionId, std::vector<SentenceRecord>> grouped;
  for (auto& r : records) grouped[r.opinion_id].push_back(std::move(r));
  for (auto& [id, list] : grouped)
    std::sort(list.begin(), list.end(), [](const SentenceRecord& a, const SentenceRecord& b) {
      return a.sentence_id < b.sentence_id;
    });
  return grouped;
}

EvalReport evaluate(const std::vector<RankedSentences>& rankings,
                    const std::map<OpinionId, std::vector<SentenceRecord>>& gold,
                    const EvalOptions& options) {
  if (options.top_k < 1) throw Error(ErrorKind::kUsage, "InvalidTopK", "top_k must be >= 1");
  std::vector<const RankedSentences*> sorted;
  sorted.reserve(rankings.size());
  for (const auto& r : rankings) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return a->opinion_id < b->opinion_id;
  });

  EvalReport report;
  report.options = options;
  for (const RankedSentences* ranking : sorted) {
    auto it = gold.find(ranking->opinion_id);
    if (it == gold.end())
      throw Error(ErrorKind::kData, "MissingGold",
                  "no gold records for opinion " + std::to_string(ranking->opinion_id));
    const auto& sentences = it->second;
    std::size_t limit = sentences.size();
    if (options.truncate_words) limit = sentences_within(sentences, *options.truncate_words);

    std::vector<std::int64_t> order;
    for (std::int64_t id : ranking->order) {
      if (id < 0 || static_cast<std::size_t>(id) >= sentences.size())
        throw Error(ErrorKind::kData, "RankingMismatch",
                    "opinion " + std::to_string(ranking->opinion_id) + " ranks unknown sentence " +
                        std::to_string(id));
      if (static_cast<std::size_t>(id) < limit) order.push_back(id);
    }
    std::set<std::int64_t> relevant;
    for (std::size_t s = 0; s < limit; ++s)
      if (sentences[s].highlight) relevant.insert(static_cast<std::int64_t>(s));
    if (relevant.empty()) {
      ++report.skipped_no_relevant;
      continue;
    }
    for (std::int64_t id : relevant)
      if (std::find(order.begin(), order.end(), id) == order.end())
        throw Error(ErrorKind::kData, "RankingMismatch",
                    "opinion " + std::to_string(ranking->opinion_id) +
                        " ranking omits highlight sentence " + std::to_string(id));

    OpinionEval e;
    e.opinion_id = ranking->opinion_id;
    e.ranking = ranking_metrics(order, relevant);
    e.relevant = relevant.size();
    e.sentences = limit;

    std::vector<std::int64_t> top(order.begin(),
                                  order.begin() + static_cast<std::ptrdiff_t>(std::min(
                                                      order.size(),
                                                      static_cast<std::size_t>(options.top_k))));
    std::sort(top.begin(), top.end());
    std::vector<std::string> hyp, ref;
    for (std::int64_t id : top)
      for (auto& t : metric_tokens(sentences[static_cast<std::size_t>(id)].raw_text))
        hyp.push_back(std::move(t));
    for (std::int64_t id : relevant)
      for (auto& t : metric_tokens(sentences[static_cast<std::size_t>(id)].raw_text))
        ref.push_back(std::move(t));
    e.rouge1 = rouge_n(hyp, ref, 1);
    e.rouge2 = rouge_n(hyp, ref, 2);
    e.rougeL = rouge_l(hyp, ref);
    report.per_opinion.push_back(e);
  }

  report.opinions = report.per_opinion.size();
  if (report.opinions > 0) {
    const double n = static_cast<double>(report.opinions);
    auto add = [](RougeScore& acc, const RougeScore& s) {
      acc.precision += s.precision;
      acc.recall += s.recall;
      acc.f1 += s.f1;
    };
    for (const OpinionEval& e : report.per_opinion) {
      report.mean_ranking.p_at_1 += e.ranking.p_at_1;
      report.mean_ranking.p_at_r += e.ranking.p_at_r;
      report.mean_ranking.average_precision += e.ranking.average_precision;
      report.mean_ranking.reciprocal_rank += e.ranking.reciprocal_rank;
      add(report.mean_rouge1, e.rouge1);
      add(report.mean_rouge2, e.rouge2);
      add(report.mean_rougeL, e.rougeL);
    }
    report.mean_ranking.p_at_1 /= n;
    report.mean_ranking.p_at_r /= n;
    report.mean_ranking.average_precision /= n;
    report.mean_ranking.reciprocal_rank /= n;
    for (RougeScore* s : {&report.mean_rouge1, &report.mean_rouge2, &report.mean_rougeL}) {
      s->precision /= n;
      s->recall /= n;
      s->f1 /= n;
    }
  }
  return report;
}

}  // namespace quotegraph
