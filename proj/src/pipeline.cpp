#include "quotegraph/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <thread>

#include "quotegraph/error.hpp"

namespace quotegraph {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_integer(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw Error(ErrorKind::kUsage, "InvalidConfig", key + ": expected an integer, got '" + value + "'");
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::kUsage, "InvalidConfig", key + ": expected a number, got '" + value + "'");
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw Error(ErrorKind::kUsage, "InvalidConfig", key + ": expected true/false, got '" + value + "'");
}

template <typename Fn>
void parallel_chunks(std::size_t n, int workers, Fn fn) {
  const std::size_t threads = std::max<std::size_t>(
      1, std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), n));
  if (threads == 1) {
    fn(0, std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back(fn, t, t * n / threads, (t + 1) * n / threads);
  for (auto& th : pool) th.join();
}

struct OpinionResult {
  std::vector<VerbatimEdge> edges;
  std::vector<VerbatimEdge> rejects;
  PipelineCounters counters;
  std::int64_t missing_cited = 0;
};

}  // namespace

void PipelineConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::kUsage, "InvalidConfig", what);
  };
  if (window < 1) fail("window must be >= 1");
  if (min_quote_words < 1) fail("min_quote_words must be >= 1");
  if (max_quote_words < min_quote_words) fail("max_quote_words must be >= min_quote_words");
  if (word_limit < 1) fail("word_limit must be >= 1");
  if (top_k < 1) fail("top_k must be >= 1");
  if (workers < 1 || workers > 256) fail("workers must be in [1, 256]");
  match.validate();
}

AnchorConfig PipelineConfig::anchor_config() const {
  AnchorConfig a;
  a.window_words = window;
  a.min_quote_words = min_quote_words;
  a.max_quote_words = max_quote_words;
  return a;
}

PipelineConfig parse_config_text(const std::string& text, PipelineConfig cfg) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::kUsage, "InvalidConfig",
                  "line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "window") cfg.window = parse_integer<int>(key, value);
    else if (key == "min_quote_words") cfg.min_quote_words = parse_integer<int>(key, value);
    else if (key == "max_quote_words") cfg.max_quote_words = parse_integer<int>(key, value);
    else if (key == "max_gap_run") cfg.match.max_gap_run = parse_integer<int>(key, value);
    else if (key == "max_skip_ratio") cfg.match.max_skip_ratio = parse_real(key, value);
    else if (key == "fuzzy_min_length") cfg.match.fuzzy_min_length = parse_integer<int>(key, value);
    else if (key == "min_tokens") cfg.match.min_tokens = parse_integer<int>(key, value);
    else if (key == "word_limit") cfg.word_limit = parse_integer<std::int64_t>(key, value);
    else if (key == "top_k") cfg.top_k = parse_integer<int>(key, value);
    else if (key == "workers") cfg.workers = parse_integer<int>(key, value);
    else if (key == "seed") cfg.seed = parse_integer<std::uint64_t>(key, value);
    else if (key == "emit_all") cfg.emit_all = parse_bool(key, value);
    else if (key == "exact_limit") cfg.exact_limit = parse_integer<std::size_t>(key, value);
    else if (key == "pivots") cfg.pivots = parse_integer<std::size_t>(key, value);
    else if (key == "input") cfg.input = value;
    else if (key == "output_dir") cfg.output_dir = value;
    else
      throw Error(ErrorKind::kUsage, "InvalidConfig",
                  "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  return cfg;
}

PipelineConfig load_config_file(const std::string& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "IoError", "cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), std::move(base));
}

std::string to_config_text(const PipelineConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "window = " << cfg.window << '\n'
      << "min_quote_words = " << cfg.min_quote_words << '\n'
      << "max_quote_words = " << cfg.max_quote_words << '\n'
      << "max_gap_run = " << cfg.match.max_gap_run << '\n'
      << "max_skip_ratio = " << cfg.match.max_skip_ratio << '\n'
      << "fuzzy_min_length = " << cfg.match.fuzzy_min_length << '\n'
      << "min_tokens = " << cfg.match.min_tokens << '\n'
      << "word_limit = " << cfg.word_limit << '\n'
      << "top_k = " << cfg.top_k << '\n'
      << "workers = " << cfg.workers << '\n'
      << "seed = " << cfg.seed << '\n'
      << "emit_all = " << (cfg.emit_all ? "true" : "false") << '\n'
      << "exact_limit = " << cfg.exact_limit << '\n'
      << "pivots = " << cfg.pivots << '\n';
  if (!cfg.input.empty()) out << "input = " << cfg.input << '\n';
  out << "output_dir = " << cfg.output_dir << '\n';
  return out.str();
}

PipelineOutput run_pipeline(const std::vector<Opinion>& corpus, const PipelineConfig& cfg,
                            DropReport drops) {
  cfg.validate();
  const AnchorConfig anchor_cfg = cfg.anchor_config();

  // Normalized views of every opinion that some mention points at.
  std::vector<std::size_t> cited_positions;
  {
    std::vector<bool> cited(corpus.size(), false);
    for (const Opinion& op : corpus)
      for (const CitationMention& m : op.mentions)
        if (const Opinion* target = find_opinion(corpus, m.cited_opinion_id))
          cited[static_cast<std::size_t>(target - corpus.data())] = true;
    for (std::size_t i = 0; i < corpus.size(); ++i)
      if (cited[i]) cited_positions.push_back(i);
  }
  std::vector<std::unique_ptr<CitedIndex>> indices(corpus.size());
  parallel_chunks(cited_positions.size(), cfg.workers,
                  [&](std::size_t, std::size_t begin, std::size_t end) {
                    for (std::size_t k = begin; k < end; ++k) {
                      std::size_t i = cited_positions[k];
                      indices[i] = std::make_unique<CitedIndex>(corpus[i]);
                    }
                  });

  std::vector<OpinionResult> results(corpus.size());
  parallel_chunks(corpus.size(), cfg.workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const Opinion& citing = corpus[idx];
      OpinionResult& res = results[idx];
      if (!citing.mentions.empty()) ++res.counters.citing_opinions;
      for (std::size_t mi = 0; mi < citing.mentions.size(); ++mi) {
        ++res.counters.mentions;
        const Opinion* cited = find_opinion(corpus, citing.mentions[mi].cited_opinion_id);
        if (cited == nullptr) {
          ++res.missing_cited;
          continue;
        }
        const CitedIndex& index = *indices[static_cast<std::size_t>(cited - corpus.data())];
        Snippet snippet = extract_snippet(citing, mi, cfg.window);
        ++res.counters.snippets;
        for (const VerbatimCandidate& cand :
             extract_candidates(snippet, anchor_cfg, &res.counters.candidates)) {
          MatchResult match = qualify(cand.quoted_text, index, cfg.match);
          VerbatimEdge edge{citing.opinion_id, cited->opinion_id, -1, cand.quoted_text,
                            snippet.text, -1.0};
          if (!match.matched) {
            if (match.status == MatchStatus::kTooShort) ++res.counters.too_short_for_matching;
            ++res.counters.rejected;
            res.rejects.push_back(std::move(edge));
            continue;
          }
          ++res.counters.qualified;
          edge.score = match.score;
          const auto sentences = align_sentences(match, *cited);
          if (sentences.size() > 1) ++res.counters.multi_sentence_quotes;
          for (std::size_t s : sentences) {
            edge.sentence_id = static_cast<std::int64_t>(s);
            res.edges.push_back(edge);
          }
        }
      }
    }
  });

  PipelineOutput out;
  out.drops = std::move(drops);
  out.counters.opinions = static_cast<std::int64_t>(corpus.size());
  for (OpinionResult& res : results) {
    out.drops.missing_cited_opinions += res.missing_cited;
    auto& c = out.counters;
    c.citing_opinions += res.counters.citing_opinions;
    c.mentions += res.counters.mentions;
    c.snippets += res.counters.snippets;
    c.candidates.merge(res.counters.candidates);
    c.qualified += res.counters.qualified;
    c.rejected += res.counters.rejected;
    c.too_short_for_matching += res.counters.too_short_for_matching;
    c.multi_sentence_quotes += res.counters.multi_sentence_quotes;
    std::move(res.edges.begin(), res.edges.end(), std::back_inserter(out.edges));
    std::move(res.rejects.begin(), res.rejects.end(), std::back_inserter(out.rejects));
  }
  out.highlights = build_highlights(out.edges, corpus, cfg.emit_all);
  out.counters.edge_records = static_cast<std::int64_t>(out.edges.size());
  out.counters.highlight_records = static_cast<std::int64_t>(out.highlights.size());
  std::map<OpinionId, bool> cited_ids;
  for (const SentenceRecord& r : out.highlights) {
    if (r.highlight) {
      ++out.counters.highlighted_sentences;
      cited_ids[r.opinion_id] = true;
    }
  }
  out.counters.cited_opinions = static_cast<std::int64_t>(cited_ids.size());
  return out;
}

PipelineOutput run_pipeline_on_file(const PipelineConfig& cfg) {
  cfg.validate();
  DropReport drops;
  auto raws = read_corpus_file(cfg.input, &drops);
  auto corpus = parse_corpus(raws, &drops, cfg.workers);
  return run_pipeline(corpus, cfg, std::move(drops));
}

records::Json summary_json(const PipelineOutput& out, const PipelineConfig& cfg) {
  using records::Json;
  const DropReport& d = out.drops;
  const PipelineCounters& c = out.counters;
  Json j;
  j["corpus"] = {{"lines_read", d.lines_read},
                 {"unparseable_lines", d.unparseable_lines},
                 {"unparseable_line_numbers", d.unparseable_line_numbers},
                 {"duplicate_ids", d.duplicate_ids},
                 {"empty_documents", d.empty_documents},
                 {"opinions", c.opinions}};
  j["citations"] = {{"mentions", c.mentions},
                    {"citing_opinions", c.citing_opinions},
                    {"malformed_citation_ids", d.malformed_citation_ids},
                    {"self_citations", d.self_citations},
                    {"missing_cited_opinions", d.missing_cited_opinions},
                    {"snippets", c.snippets}};
  j["candidates"] = {{"candidates", c.candidates.candidates},
                     {"too_short", c.candidates.too_short},
                     {"too_long", c.candidates.too_long},
                     {"unbalanced_quotes", c.candidates.unbalanced_quotes}};
  j["verbatim"] = {{"qualified", c.qualified},
                   {"rejected", c.rejected},
                   {"too_short_for_matching", c.too_short_for_matching},
                   {"multi_sentence_quotes", c.multi_sentence_quotes}};
  j["output"] = {{"edge_records", c.edge_records},
                 {"reject_records", static_cast<std::int64_t>(out.rejects.size())},
                 {"highlight_records", c.highlight_records},
                 {"highlighted_sentences", c.highlighted_sentences},
                 {"cited_opinions", c.cited_opinions}};
  j["config"] = {{"window", cfg.window},
                 {"min_quote_words", cfg.min_quote_words},
                 {"max_quote_words", cfg.max_quote_words},
                 {"max_gap_run", cfg.match.max_gap_run},
                 {"max_skip_ratio", cfg.match.max_skip_ratio},
                 {"fuzzy_min_length", cfg.match.fuzzy_min_length},
                 {"min_tokens", cfg.match.min_tokens},
                 {"emit_all", cfg.emit_all}};
  return j;
}

void write_pipeline_outputs(const PipelineOutput& out, const PipelineConfig& cfg) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec)
    throw Error(ErrorKind::kIo, "IoError", "cannot create output directory " + cfg.output_dir);
  const fs::path dir(cfg.output_dir);
  records::write_records((dir / records::kGraphFile).string(), out.edges);
  records::write_records((dir / records::kHighlightsFile).string(), out.highlights);
  records::write_records((dir / records::kRejectsFile).string(), out.rejects);
  records::write_json((dir / records::kDropReportFile).string(), summary_json(out, cfg));
}

}  // namespace quotegraph
