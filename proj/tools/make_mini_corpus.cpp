#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "quotegraph/error.hpp"
#include "quotegraph/synth.hpp"

using namespace quotegraph;

int main(int argc, char** argv) {
  CLI::App app{"Writes the synthetic mini-corpus and its ground truth"};
  std::string out_dir = "data";
  synth::MiniCorpusConfig cfg;
  app.add_option("--output-dir", out_dir, "Destination directory");
  app.add_option("--seed", cfg.seed, "Generator seed");
  app.add_option("--opinions", cfg.opinions, "Number of opinions");
  app.add_option("--citations", cfg.planted_citations, "Planted citations");
  CLI11_PARSE(app, argc, argv);

  try {
    std::filesystem::create_directories(out_dir);
    const synth::MiniCorpus corpus = synth::make_mini_corpus(cfg);
    const std::filesystem::path dir(out_dir);
    synth::write_corpus((dir / "mini_corpus.jsonl").string(), corpus.documents);
    synth::write_truth((dir / "mini_corpus_truth.jsonl").string(), corpus.truth);
    std::cout << corpus.documents.size() << " opinions, " << corpus.truth.size()
              << " planted citations, " << corpus.decoy_quotes << " decoy quotes, "
              << corpus.missing_citations << " missing ids\n";
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
