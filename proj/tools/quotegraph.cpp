#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"

#include "quotegraph/audit.hpp"
#include "quotegraph/corpus.hpp"
#include "quotegraph/error.hpp"
#include "quotegraph/evalkit.hpp"
#include "quotegraph/graph.hpp"
#include "quotegraph/highlight.hpp"
#include "quotegraph/pipeline.hpp"
#include "quotegraph/records.hpp"
#include "quotegraph/stats.hpp"

using namespace quotegraph;
using records::Json;

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
      return 1;
    case ErrorKind::kIo:
      return 2;
    case ErrorKind::kSchema:
    case ErrorKind::kData:
    case ErrorKind::kPrecondition:
      return 3;
  }
  return 3;
}

// Flags shared by every subcommand. Values only override the configuration
// when given on the command line.
struct CommonFlags {
  std::string config;
  int window = 0;
  int min_quote_words = 0;
  int max_quote_words = 0;
  int max_gap_run = 0;
  double max_skip_ratio = 0;
  std::int64_t word_limit = 0;
  int top_k = 0;
  int workers = 0;
  std::uint64_t seed = 0;
  bool emit_all = false;

  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App* app) {
    options["config"] = app->add_option("--config", config, "Plain-text key = value config file");
    options["window"] = app->add_option("--window", window, "Snippet words on each side (100)");
    options["min"] = app->add_option("--min-quote-words", min_quote_words, "Shortest candidate (5)");
    options["max"] = app->add_option("--max-quote-words", max_quote_words, "Longest candidate (100)");
    options["gap"] = app->add_option("--max-gap-run", max_gap_run, "Largest unmatched cited run (8)");
    options["skip"] = app->add_option("--max-skip-ratio", max_skip_ratio,
                                      "Fraction of quote tokens allowed to go unmatched (0.15)");
    options["limit"] = app->add_option("--word-limit", word_limit, "Test-set word limit (512)");
    options["topk"] = app->add_option("--top-k", top_k, "Sentences in the extractive summary (5)");
    options["workers"] = app->add_option("--workers", workers, "Worker threads (1)");
    options["seed"] = app->add_option("--seed", seed, "Random seed (0)");
    options["emit_all"] = app->add_flag("--emit-all", emit_all,
                                        "Emit sentence records for every opinion, not only cited ones");
  }

  bool given(const std::string& key) const { return options.at(key)->count() > 0; }

  PipelineConfig resolve() const {
    PipelineConfig cfg;
    if (given("config")) cfg = load_config_file(config, cfg);
    if (given("window")) cfg.window = window;
    if (given("min")) cfg.min_quote_words = min_quote_words;
    if (given("max")) cfg.max_quote_words = max_quote_words;
    if (given("gap")) cfg.match.max_gap_run = max_gap_run;
    if (given("skip")) cfg.match.max_skip_ratio = max_skip_ratio;
    if (given("limit")) cfg.word_limit = word_limit;
    if (given("topk")) cfg.top_k = top_k;
    if (given("workers")) cfg.workers = workers;
    if (given("seed")) cfg.seed = seed;
    if (given("emit_all")) cfg.emit_all = emit_all;
    cfg.validate();
    return cfg;
  }
};

void emit_json(const std::string& path, const Json& doc) {
  if (path.empty() || path == "-") {
    std::cout << doc.dump(2) << '\n';
  } else {
    records::write_json(path, doc);
  }
}

std::vector<Opinion> load_corpus(const std::string& path, int workers, DropReport* drops) {
  auto raws = read_corpus_file(path, drops);
  return parse_corpus(raws, drops, workers);
}

int run(int argc, char** argv) {
  CLI::App app{"Verbatim-quote citation graph builder and highlight evaluator"};
  app.require_subcommand(1);

  // pipeline
  CommonFlags pipe_flags;
  std::string pipe_input, pipe_output;
  auto* pipe = app.add_subcommand("pipeline", "Corpus to graph, highlight and reject records");
  pipe->add_option("--input", pipe_input, "Corpus file (jsonl)");
  pipe->add_option("--output-dir", pipe_output, "Directory for the output files");
  pipe_flags.attach(pipe);

  // graph-stats
  CommonFlags stats_flags;
  std::string stats_graph, stats_output, stats_highlights;
  std::size_t stats_pivots = 0, stats_exact_limit = kDefaultExactLimit;
  auto* stats = app.add_subcommand("graph-stats", "Statistics of a graph file");
  stats->add_option("--graph", stats_graph, "Graph record file")->required();
  stats->add_option("--highlights", stats_highlights, "Optional highlight record file");
  stats->add_option("--output", stats_output, "Report path (stdout when omitted)");
  stats->add_option("--pivots", stats_pivots, "Sampled sources for approximate betweenness");
  stats->add_option("--exact-limit", stats_exact_limit, "Largest graph for exact betweenness");
  stats_flags.attach(stats);

  // highlights
  CommonFlags hl_flags;
  std::string hl_graph, hl_corpus, hl_output;
  auto* hl = app.add_subcommand("highlights", "Sentence records from a graph file and its corpus");
  hl->add_option("--graph", hl_graph, "Graph record file")->required();
  hl->add_option("--corpus", hl_corpus, "Corpus file (jsonl)")->required();
  hl->add_option("--output", hl_output, "Highlight record file")->required();
  hl_flags.attach(hl);

  // rank
  CommonFlags rank_flags;
  std::string rank_corpus, rank_output, rank_ranker;
  std::string rank_highlights;
  auto* rank = app.add_subcommand("rank", "Rank the sentences of every opinion");
  rank->add_option("--corpus", rank_corpus, "Corpus file (jsonl)")->required();
  rank->add_option("--ranker", rank_ranker, "textrank, position or random")->required();
  rank->add_option("--output", rank_output, "Ranking record file")->required();
  rank->add_option("--highlights", rank_highlights,
                   "Only rank opinions present in this highlight record file");
  rank_flags.attach(rank);

  // evaluate
  CommonFlags eval_flags;
  std::string eval_rankings, eval_highlights, eval_output;
  bool eval_truncate = false;
  auto* eval = app.add_subcommand("evaluate", "Score rankings against highlight records");
  eval->add_option("--rankings", eval_rankings, "Ranking record file")->required();
  eval->add_option("--highlights", eval_highlights, "Highlight record file")->required();
  eval->add_option("--output", eval_output, "Report path (stdout when omitted)");
  eval->add_flag("--truncate", eval_truncate,
                 "Cut rankings and gold to the sentences within --word-limit");
  eval_flags.attach(eval);

  // audit-sample
  CommonFlags as_flags;
  std::string as_graph, as_rejects, as_corpus, as_output;
  std::size_t as_k = 180;
  auto* as = app.add_subcommand("audit-sample", "Draw anchors for manual labeling");
  as->add_option("--graph", as_graph, "Graph record file")->required();
  as->add_option("--rejects", as_rejects, "Reject record file");
  as->add_option("--corpus", as_corpus, "Corpus file, adds cited text to each item");
  as->add_option("-k,--count", as_k, "Number of anchors (180)");
  as->add_option("--output", as_output, "Audit file")->required();
  as_flags.attach(as);

  // audit-score
  CommonFlags sc_flags;
  std::string sc_audit, sc_labels, sc_output;
  auto* sc = app.add_subcommand("audit-score", "Precision and recall of labeled anchors");
  sc->add_option("--audit", sc_audit, "Audit file with gold labels")->required();
  sc->add_option("--labels", sc_labels, "Optional {audit_id, gold} label file");
  sc->add_option("--output", sc_output, "Report path (stdout when omitted)");
  sc_flags.attach(sc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (pipe->parsed()) {
    PipelineConfig cfg = pipe_flags.resolve();
    if (!pipe_input.empty()) cfg.input = pipe_input;
    if (!pipe_output.empty()) cfg.output_dir = pipe_output;
    if (cfg.input.empty()) throw Error(ErrorKind::kUsage, "MissingInput", "--input is required");
    PipelineOutput out = run_pipeline_on_file(cfg);
    write_pipeline_outputs(out, cfg);
    std::cout << summary_json(out, cfg).dump(2) << '\n';
    return 0;
  }

  if (stats->parsed()) {
    PipelineConfig cfg = stats_flags.resolve();
    CitationGraph g = build_graph(records::read_edges(stats_graph));
    StatsOptions opt;
    opt.exact_limit = stats_exact_limit;
    opt.pivots = stats_pivots;
    opt.seed = cfg.seed;
    opt.workers = cfg.workers;
    Json report = graph_stats(g, opt);
    if (!stats_highlights.empty())
      report["highlights"] = highlight_stats(records::read_sentences(stats_highlights));
    emit_json(stats_output, report);
    return 0;
  }

  if (hl->parsed()) {
    PipelineConfig cfg = hl_flags.resolve();
    DropReport drops;
    auto corpus = load_corpus(hl_corpus, cfg.workers, &drops);
    auto edges = records::read_edges(hl_graph);
    HighlightCounters counters;
    auto highlights = build_highlights(edges, corpus, cfg.emit_all, &counters);
    records::write_records(hl_output, highlights);
    std::cout << Json{{"records", highlights.size()},
                      {"missing_cited_opinion", counters.missing_cited_opinion},
                      {"invalid_sentence_id", counters.invalid_sentence_id}}
                     .dump(2)
              << '\n';
    return 0;
  }

  if (rank->parsed()) {
    PipelineConfig cfg = rank_flags.resolve();
    if (rank_ranker != "textrank" && rank_ranker != "position" && rank_ranker != "random")
      throw Error(ErrorKind::kUsage, "UnknownRanker",
                  "'" + rank_ranker + "' is not one of textrank, position, random");
    DropReport drops;
    auto corpus = load_corpus(rank_corpus, cfg.workers, &drops);
    std::optional<std::set<OpinionId>> keep;
    if (!rank_highlights.empty()) {
      keep.emplace();
      for (const auto& r : records::read_sentences(rank_highlights)) keep->insert(r.opinion_id);
    }
    std::vector<records::RankingRecord> rows;
    for (const Opinion& op : corpus) {
      if (keep && !keep->count(op.opinion_id)) continue;
      records::RankingRecord row;
      row.ranker = rank_ranker;
      if (rank_ranker == "textrank") {
        row.ranking = textrank_rank(op);
      } else if (rank_ranker == "position") {
        row.ranking = position_rank(op);
      } else {
        row.ranking = random_rank(op, cfg.seed);
        row.seed = cfg.seed;
      }
      rows.push_back(std::move(row));
    }
    records::write_records(rank_output, rows);
    return 0;
  }

  if (eval->parsed()) {
    PipelineConfig cfg = eval_flags.resolve();
    auto rows = records::read_rankings(eval_rankings);
    auto gold = group_by_opinion(records::read_sentences(eval_highlights));
    const std::set<OpinionId> test_set = filter_test_set(gold, cfg.word_limit);
    std::vector<RankedSentences> rankings;
    std::set<std::string> rankers;
    std::set<std::uint64_t> seeds;
    for (auto& row : rows) {
      if (row.ranker) rankers.insert(*row.ranker);
      if (row.seed) seeds.insert(*row.seed);
      if (test_set.count(row.ranking.opinion_id)) rankings.push_back(std::move(row.ranking));
    }
    if (rankings.empty())
      throw Error(ErrorKind::kData, "NoOverlap",
                  "no ranked opinion has a highlight sentence ending within the first " +
                      std::to_string(cfg.word_limit) + " words (" +
                      std::to_string(test_set.size()) + " opinions pass the filter, " +
                      std::to_string(rows.size()) + " rankings read)");
    EvalOptions options;
    options.top_k = cfg.top_k;
    if (eval_truncate) options.truncate_words = cfg.word_limit;
    Json report = records::to_json(evaluate(rankings, gold, options));
    report["word_limit"] = cfg.word_limit;
    report["test_set_opinions"] = test_set.size();
    if (rankers.size() == 1) report["ranker"] = *rankers.begin();
    if (seeds.size() == 1) report["seed"] = *seeds.begin();
    emit_json(eval_output, report);
    return 0;
  }

  if (as->parsed()) {
    PipelineConfig cfg = as_flags.resolve();
    auto edges = records::read_edges(as_graph);
    std::vector<VerbatimEdge> rejects;
    if (!as_rejects.empty()) rejects = records::read_edges(as_rejects);
    std::optional<std::vector<Opinion>> corpus;
    if (!as_corpus.empty()) {
      DropReport drops;
      corpus = load_corpus(as_corpus, cfg.workers, &drops);
    }
    auto items = audit_sample(edges, rejects, as_k, cfg.seed, corpus ? &*corpus : nullptr);
    std::vector<Json> lines;
    for (const AuditItem& item : items) lines.push_back(to_json(item));
    records::write_lines(as_output, lines);
    return 0;
  }

  if (sc->parsed()) {
    sc_flags.resolve();
    auto items = read_audit_file(sc_audit);
    std::map<std::int64_t, bool> labels;
    if (!sc_labels.empty()) labels = read_labels(sc_labels);
    emit_json(sc_output, to_json(audit_score(items, labels)));
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
