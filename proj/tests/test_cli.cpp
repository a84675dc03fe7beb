#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "quotegraph/audit.hpp"
#include "quotegraph/records.hpp"

using namespace quotegraph;
namespace fs = std::filesystem;
using Json = records::Json;

namespace {

const fs::path kWork = fs::temp_directory_path() / "qg_cli";
const std::string kCorpus = std::string(QG_DATA_DIR) + "/mini_corpus.jsonl";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run cli(const std::string& args) {
  const fs::path out = kWork / "stdout.txt", err = kWork / "stderr.txt";
  const std::string cmd = std::string(QG_CLI_PATH) + " " + args + " >" + out.string() + " 2>" +
                          err.string();
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string path(const std::string& name) { return (kWork / name).string(); }

void write(const std::string& name, const std::string& content) { std::ofstream(path(name)) << content; }

// Runs the pipeline on the bundled corpus once per test binary.
const fs::path& pipeline_dir() {
  static const fs::path dir = [] {
    fs::path d = kWork / "pipe";
    fs::remove_all(d);
    Run r = cli("pipeline --input " + kCorpus + " --output-dir " + d.string());
    REQUIRE(r.code == 0);
    return d;
  }();
  return dir;
}

struct Setup {
  Setup() { fs::create_directories(kWork); }
} setup;

}  // namespace

TEST_CASE("cli: pipeline writes the record files and a summary") {
  const fs::path& dir = pipeline_dir();
  for (const char* f : {records::kGraphFile, records::kHighlightsFile, records::kRejectsFile,
                        records::kDropReportFile})
    CHECK(fs::exists(dir / f));
  auto summary = Json::parse(slurp(dir / records::kDropReportFile));
  CHECK(summary["citations"]["missing_cited_opinions"] == 10);
  CHECK(summary["output"]["edge_records"].get<std::size_t>() ==
        records::validate_graph_file((dir / records::kGraphFile).string()));
}

TEST_CASE("cli: stage commands compose to the pipeline output") {
  const fs::path& dir = pipeline_dir();
  Run r = cli("highlights --graph " + (dir / records::kGraphFile).string() + " --corpus " + kCorpus +
              " --output " + path("hl.jsonl"));
  REQUIRE(r.code == 0);
  CHECK(slurp(path("hl.jsonl")) == slurp(dir / records::kHighlightsFile));
}

TEST_CASE("cli: graph-stats") {
  write("single.jsonl",
        "{\"citing_opinion_id\":1,\"cited_opinion_id\":2,\"sentence_id\":0,\"verbatim\":\"v\","
        "\"snippet\":\"s\",\"score\":1.0}\n");
  Run r = cli("graph-stats --graph " + path("single.jsonl"));
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["density"].get<double>() == 0.5);

  const fs::path& dir = pipeline_dir();
  r = cli("graph-stats --graph " + (dir / records::kGraphFile).string() + " --highlights " +
          (dir / records::kHighlightsFile).string() + " --output " + path("stats.json"));
  REQUIRE(r.code == 0);
  auto stats = Json::parse(slurp(path("stats.json")));
  const double n = stats["nodes"].get<double>();
  CHECK(stats["density"].get<double>() ==
        doctest::Approx(stats["simple_edges"].get<double>() / (n * (n - 1))));
  CHECK(stats["highlights"]["highlighted_sentences"].get<int>() > 0);

  write("broken.jsonl",
        "{\"citing_opinion_id\":1,\"cited_opinion_id\":2,\"sentence_id\":0,\"verbatim\":\"v\","
        "\"snippet\":\"s\",\"score\":1.0}\n{\"citing_opinion_id\":1}\n");
  r = cli("graph-stats --graph " + path("broken.jsonl"));
  CHECK(r.code == 3);
  CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("cli: rank and evaluate") {
  const fs::path& dir = pipeline_dir();
  const std::string hl = (dir / records::kHighlightsFile).string();
  Run r = cli("rank --corpus " + kCorpus + " --ranker textrank --highlights " + hl + " --output " +
              path("tr.jsonl"));
  REQUIRE(r.code == 0);
  r = cli("evaluate --rankings " + path("tr.jsonl") + " --highlights " + hl);
  REQUIRE(r.code == 0);
  auto report = Json::parse(r.out);
  CHECK(report["ranker"] == "textrank");
  CHECK(report["word_limit"] == 512);
  CHECK(report["opinions"].get<int>() > 0);

  // A ranking that puts every highlight first scores 1 everywhere.
  std::map<std::int64_t, std::vector<SentenceRecord>> gold =
      group_by_opinion(records::read_sentences(hl));
  std::vector<records::RankingRecord> perfect;
  for (const auto& [id, sentences] : gold) {
    std::vector<double> scores;
    for (const auto& s : sentences) scores.push_back(s.highlight ? 1.0 : 0.0);
    perfect.push_back({rank_by_scores(id, scores), std::string("oracle"), std::nullopt});
  }
  records::write_records(path("perfect.jsonl"), perfect);
  r = cli("evaluate --rankings " + path("perfect.jsonl") + " --highlights " + hl);
  REQUIRE(r.code == 0);
  report = Json::parse(r.out);
  CHECK(report["mean"]["MAP"] == 1.0);
  CHECK(report["mean"]["MRR"] == 1.0);
  CHECK(report["mean"]["P@1"] == 1.0);
  CHECK(report["mean"]["P@R"] == 1.0);

  std::set<std::string> reports;
  for (int seed = 1; seed <= 3; ++seed) {
    r = cli("rank --corpus " + kCorpus + " --ranker random --seed " + std::to_string(seed) +
            " --highlights " + hl + " --output " + path("rnd.jsonl"));
    REQUIRE(r.code == 0);
    r = cli("evaluate --rankings " + path("rnd.jsonl") + " --highlights " + hl);
    REQUIRE(r.code == 0);
    report = Json::parse(r.out);
    CHECK(report["seed"] == seed);
    report.erase("seed");
    reports.insert(report.dump());
  }
  CHECK(reports.size() == 3);

  r = cli("rank --corpus " + kCorpus + " --ranker bm25 --output " + path("x.jsonl"));
  CHECK(r.code == 1);
  CHECK(r.err.find("UnknownRanker") != std::string::npos);
}

TEST_CASE("cli: evaluate reports an empty test set") {
  // Only highlight starts after word 600.
  std::string gold, ranking = "{\"opinion_id\":1,\"order\":[";
  for (int s = 0; s < 70; ++s) {
    std::string text;
    for (int w = 0; w < 10; ++w) text += "w ";
    const bool hl = s == 60;
    gold += "{\"opinion_id\":1,\"sentence_id\":" + std::to_string(s) + ",\"raw_text\":\"" + text +
            "\",\"highlight\":" + (hl ? "true" : "false") +
            ",\"count_citations\":" + (hl ? "1" : "0") + "}\n";
    ranking += (s ? "," : "") + std::to_string(s);
  }
  ranking += "],\"scores\":[";
  for (int s = 0; s < 70; ++s) ranking += (s ? "," : "") + std::to_string(70 - s);
  ranking += "]}\n";
  write("late_gold.jsonl", gold);
  write("late_rank.jsonl", ranking);
  Run r = cli("evaluate --rankings " + path("late_rank.jsonl") + " --highlights " +
              path("late_gold.jsonl") + " --word-limit 512");
  CHECK(r.code == 3);
  CHECK(r.err.find("NoOverlap") != std::string::npos);
  CHECK(r.err.find("512") != std::string::npos);
  r = cli("evaluate --rankings " + path("late_rank.jsonl") + " --highlights " +
          path("late_gold.jsonl") + " --word-limit 700");
  CHECK(r.code == 0);
}

TEST_CASE("cli: audit workflow") {
  const fs::path& dir = pipeline_dir();
  const std::string base = "audit-sample --graph " + (dir / records::kGraphFile).string() +
                           " --rejects " + (dir / records::kRejectsFile).string() +
                           " --corpus " + kCorpus + " --seed 11 -k 180 --output ";
  REQUIRE(cli(base + path("a1.jsonl")).code == 0);
  REQUIRE(cli(base + path("a2.jsonl")).code == 0);
  CHECK(slurp(path("a1.jsonl")) == slurp(path("a2.jsonl")));
  auto items = read_audit_file(path("a1.jsonl"));
  CHECK(items.size() == 180);

  Run r = cli("audit-score --audit " + path("a1.jsonl"));
  CHECK(r.code == 3);
  CHECK(r.err.find("MissingLabels") != std::string::npos);
  CHECK(r.err.find("0") != std::string::npos);

  std::string labels;
  for (const auto& it : items)
    labels += "{\"audit_id\":" + std::to_string(it.audit_id) +
              ",\"gold\":" + (it.predicted ? "true" : "false") + "}\n";
  write("labels.jsonl", labels);
  r = cli("audit-score --audit " + path("a1.jsonl") + " --labels " + path("labels.jsonl"));
  REQUIRE(r.code == 0);
  auto rep = Json::parse(r.out);
  CHECK(rep["positive"]["precision"] == 1.0);
  CHECK(rep["positive"]["recall"] == 1.0);

  write("tiny.jsonl",
        "{\"citing_opinion_id\":1,\"cited_opinion_id\":2,\"sentence_id\":0,\"verbatim\":\"v\","
        "\"snippet\":\"s\",\"score\":1.0}\n");
  r = cli("audit-sample --graph " + path("tiny.jsonl") + " -k 5 --output " + path("t.jsonl"));
  CHECK(r.code == 3);
  CHECK(r.err.find("NotEnoughRecords") != std::string::npos);
}

TEST_CASE("cli: usage and I/O errors") {
  CHECK(cli("").code == 1);
  CHECK(cli("pipeline").code == 1);
  CHECK(cli("graph-stats").code == 1);
  CHECK(cli("pipeline --input " + path("absent.jsonl") + " --output-dir " + path("o")).code == 2);
  CHECK(cli("pipeline --input " + kCorpus + " --window 0 --output-dir " + path("o")).code == 1);
  CHECK(cli("--help").code == 0);
}

TEST_CASE("cli: config file with flag overrides") {
  write("cfg.txt", "window = 3\nmin_quote_words = 50\nmax_quote_words = 60\n");
  Run r = cli("pipeline --input " + kCorpus + " --config " + path("cfg.txt") +
              " --min-quote-words 5 --output-dir " + path("cfgout"));
  REQUIRE(r.code == 0);
  auto summary = Json::parse(r.out);
  CHECK(summary["config"]["window"] == 3);
  CHECK(summary["config"]["min_quote_words"] == 5);
  CHECK(summary["config"]["max_quote_words"] == 60);
  write("bad.txt", "windows = 3\n");
  CHECK(cli("pipeline --input " + kCorpus + " --config " + path("bad.txt")).code == 1);
}
