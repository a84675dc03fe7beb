#include "quotegraph/synth.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <set>

#include "quotegraph/error.hpp"

namespace quotegraph::synth {

namespace {

using records::Json;

const std::vector<std::string> kFunctionWords = {
    "the",  "of",   "and",   "to",    "in",    "that",  "is",    "was",   "for",
    "by",   "with", "on",    "as",    "be",    "are",   "not",   "from",  "an",
    "or",   "which", "at",   "this",  "its",   "has",   "such",  "any",   "upon",
    "under", "shall", "must", "may",  "would", "their", "whether", "each", "other"};

const std::vector<std::string> kLegalWords = {
    "court",       "statute",     "contract",    "plaintiff",   "defendant",  "evidence",
    "judgment",    "appeal",      "trial",       "jury",        "verdict",    "negligence",
    "liability",   "damages",     "remedy",      "equity",      "property",   "tenant",
    "landlord",    "easement",    "covenant",    "warranty",    "breach",     "performance",
    "consideration", "agreement", "party",       "parties",     "claim",      "motion",
    "summary",     "dismissal",   "jurisdiction", "venue",      "standing",   "injury",
    "causation",   "duty",        "standard",    "review",      "discretion", "abuse",
    "error",       "harmless",    "reversal",    "remand",      "affirmance", "petition",
    "petitioner",  "respondent",  "appellant",   "appellee",    "testimony",  "witness",
    "hearsay",     "exhibit",     "record",      "finding",     "conclusion", "doctrine",
    "principle",   "precedent",   "holding",     "dictum",      "dissent",    "majority",
    "statutory",   "constitutional", "amendment", "clause",     "provision",  "section",
    "legislature", "intent",      "purpose",     "construction", "interpretation", "meaning",
    "language",    "ordinary",    "plain",       "ambiguity",   "estoppel",   "waiver",
    "laches",      "limitation",  "period",      "notice",      "service",    "process",
    "summons",     "complaint",   "answer",      "counterclaim", "pleading",  "discovery",
    "deposition",  "interrogatory", "sanction",  "contempt",    "custody",    "support",
    "marriage",    "divorce",     "estate",      "trust",       "trustee",    "beneficiary",
    "probate",     "testator",    "deed",        "title",       "mortgage",   "lien",
    "foreclosure", "bankruptcy",  "creditor",    "debtor",      "insurer",    "insured",
    "policy",      "coverage",    "exclusion",   "premium",     "employer",   "employee",
    "wages",       "compensation", "commission", "agency",      "authority",  "regulation",
    "ordinance",   "zoning",      "permit",      "license",     "municipality", "county",
    "federal",     "officer",     "arrest",      "search",      "seizure",    "warrant",
    "probable",    "cause",       "suppression", "confession",  "counsel",    "assistance",
    "conviction",  "felony",      "misdemeanor", "indictment",  "prosecution", "defense",
    "acquittal",   "reasonable",  "doubt",       "burden",      "proof",      "presumption",
    "inference",   "fraud",       "misrepresentation", "reliance", "conversion", "trespass",
    "nuisance",    "defamation",  "privilege",   "immunity",    "malice",     "punitive",
    "nominal",     "restitution", "unjust",      "enrichment",  "injunction", "declaratory",
    "mandamus",    "certiorari",  "habeas",      "corpus"};

const std::vector<std::string> kIntros = {
    "As the court explained",       "The rule is settled that",
    "We have previously held that", "This court has stated",
    "It is well established that",  "As noted in an earlier decision",
    "The controlling authority provides that", "Our cases hold that"};

bool is_abbreviation_stem(const std::string& word) {
  for (const std::string& abbr : default_abbreviations()) {
    std::string stem = abbr.substr(0, abbr.size() - 1);
    std::transform(stem.begin(), stem.end(), stem.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (stem == word) return true;
  }
  return false;
}

std::string capitalize(std::string w) {
  if (!w.empty()) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
  return w;
}

std::string join(const std::vector<std::string>& words, std::size_t b, std::size_t e) {
  std::string out;
  for (std::size_t i = b; i < e; ++i) {
    if (i > b) out += ' ';
    out += words[i];
  }
  return out;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  double real() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  bool chance(double p) { return real() < p; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Sentence words: capitalized first word, content word with '.' last.
std::vector<std::string> plain_sentence(Rng& rng, int min_len, int max_len) {
  const auto& vocab = vocabulary();
  const int len = rng.uniform(min_len, max_len);
  std::vector<std::string> words;
  for (int k = 0; k < len; ++k) {
    const bool content = k == len - 1 || !rng.chance(0.35);
    words.push_back(content ? rng.pick(vocab) : rng.pick(kFunctionWords));
  }
  words.front() = capitalize(words.front());
  words.back() += '.';
  return words;
}

std::string strip_final_period(std::string w) {
  if (!w.empty() && w.back() == '.') w.pop_back();
  return w;
}

std::string add_noise(Rng& rng, const std::string& text, double rate) {
  std::string out = text;
  for (char& c : out) {
    if (c < 'a' || c > 'z' || !rng.chance(rate)) continue;
    char r;
    do {
      r = static_cast<char>('a' + rng.uniform(0, 25));
    } while (r == c);
    c = r;
  }
  return out;
}

std::string case_name(Rng& rng) {
  const auto& vocab = vocabulary();
  return capitalize(rng.pick(vocab)) + " v. " + capitalize(rng.pick(vocab));
}

std::string citation_sentence(Rng& rng, const std::string& intro, const std::string& quote,
                              const std::string& id_text) {
  return intro + " \"" + quote + "\" " + case_name(rng) + ", <span class=\"citation\" data-id=\"" +
         id_text + "\">" + std::to_string(rng.uniform(100, 299)) + " Va. " +
         std::to_string(rng.uniform(1, 999)) + "</span> (" +
         std::to_string(rng.uniform(1950, 2020)) + ").";
}

struct Element {
  std::vector<std::string> words;  // plain sentence
  std::string markup;              // citation sentence when non-empty
  int sentences = 1;
};

struct Draft {
  OpinionId id = 0;
  std::vector<Element> elements;
  std::vector<std::int64_t> sentence_index;  // per element, first sentence id
  std::vector<std::size_t> plain;            // element indices of plain sentences
  std::set<std::size_t> cites;               // draft indices cited by this one
  std::vector<bool> used;                    // per element, already quoted somewhere
};

// Whether `text` occurs anywhere in the opinion, quotations included.
bool contains_text(const Draft& d, const std::string& text) {
  for (const Element& e : d.elements) {
    const std::string body = e.markup.empty() ? join(e.words, 0, e.words.size()) : e.markup;
    if (body.find(text) != std::string::npos) return true;
  }
  return false;
}

struct QuoteSource {
  std::string text;
  std::vector<std::int64_t> sentence_ids;
  std::size_t junction = 0;  // token index where the second sentence starts, 0 if none
};

// Interior elision of 1..max tokens kept clear of the sentence junction.
std::string elide(Rng& rng, const QuoteSource& src, int max_elided) {
  std::vector<std::string> toks;
  for (Span w : tokenize_words(src.text)) toks.emplace_back(slice(src.text, w));
  const int n = static_cast<int>(toks.size());
  for (int attempt = 0; attempt < 50; ++attempt) {
    const int d = rng.uniform(1, max_elided);
    if (n - d < 4) continue;
    const int p = rng.uniform(2, n - 2 - d);
    if (src.junction > 0) {
      const int j = static_cast<int>(src.junction);
      if (!(p + d <= j - 1 || p >= j + 1)) continue;
    }
    std::vector<std::string> out(toks.begin(), toks.begin() + p);
    out.emplace_back("...");
    out.insert(out.end(), toks.begin() + p + d, toks.end());
    return join(out, 0, out.size());
  }
  return src.text;
}

}  // namespace

const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> kVocab = [] {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const std::string& w : kLegalWords)
      if (w.size() >= 4 && !is_abbreviation_stem(w) && seen.insert(w).second) out.push_back(w);
    const std::string onsets = "bcdfghjklmnprstvz";
    const std::string vowels = "aeiou";
    const std::string codas = "nrstl";
    std::mt19937_64 rng(1);
    auto pick = [&](const std::string& s) {
      return s[std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng)];
    };
    while (out.size() < 4000) {
      std::string w;
      const int syllables = 2 + static_cast<int>(rng() % 2);
      for (int k = 0; k < syllables; ++k) {
        w += pick(onsets);
        w += pick(vowels);
        if (rng() % 3 == 0) w += pick(codas);
      }
      if (w.size() < 4 || is_abbreviation_stem(w) || !seen.insert(w).second) continue;
      out.push_back(w);
    }
    return out;
  }();
  return kVocab;
}

MiniCorpus make_mini_corpus(const MiniCorpusConfig& cfg) {
  if (cfg.opinions < 2)
    throw Error(ErrorKind::kUsage, "InvalidConfig", "mini corpus needs at least two opinions");
  Rng rng(cfg.seed);
  MiniCorpus corpus;
  std::vector<Draft> drafts(static_cast<std::size_t>(cfg.opinions));
  for (int k = 0; k < cfg.opinions; ++k) drafts[static_cast<std::size_t>(k)].id = cfg.first_id + k;

  // Planted citations per citing opinion; opinion 0 cannot cite anything.
  std::vector<int> planted(drafts.size(), 0);
  for (int c = 0; c < cfg.planted_citations; ++c)
    ++planted[1 + static_cast<std::size_t>(c % (cfg.opinions - 1))];
  std::vector<int> times_cited(drafts.size(), 0);

  // Decoy slots spread over citing opinions.
  enum class Decoy { kMisattributed, kScare, kRandom, kMissing, kSelf, kMalformed };
  std::vector<std::vector<Decoy>> decoys(drafts.size());
  auto spread = [&](int count, Decoy kind, int first) {
    for (int c = 0; c < count; ++c)
      decoys[static_cast<std::size_t>(rng.uniform(first, cfg.opinions - 1))].push_back(kind);
  };
  spread(cfg.misattributed_quotes, Decoy::kMisattributed, 2);
  spread(cfg.scare_quotes, Decoy::kScare, 1);
  spread(cfg.random_quotes, Decoy::kRandom, 1);
  spread(cfg.missing_citations, Decoy::kMissing, 0);
  spread(cfg.self_citations, Decoy::kSelf, 0);
  spread(cfg.malformed_citations, Decoy::kMalformed, 0);

  const auto random_quote = [&](int lo, int hi) {
    std::vector<std::string> w = plain_sentence(rng, lo, hi);
    w.front()[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(w.front()[0])));
    w.back() = strip_final_period(w.back());
    return join(w, 0, w.size());
  };

  for (std::size_t k = 0; k < drafts.size(); ++k) {
    Draft& d = drafts[k];
    const int plain_count = rng.uniform(30, 45);
    for (int s = 0; s < plain_count; ++s) d.elements.push_back({plain_sentence(rng, 8, 25), {}, 1});

    std::vector<Element> citations;
    std::set<std::size_t>& cites = d.cites;
    for (int c = 0; c < planted[k]; ++c) {
      QuoteSource src;
      const bool spanning = rng.chance(cfg.spanning_rate);
      std::size_t t = 0;
      bool built = false;
      for (int draw = 0; draw < 50 && !built; ++draw) {
        // Preferential attachment over earlier opinions.
        std::vector<double> weights;
        for (std::size_t o = 0; o < k; ++o) weights.push_back(1.0 + times_cited[o]);
        std::discrete_distribution<std::size_t> pick_target(weights.begin(), weights.end());
        t = pick_target(rng.engine());
        Draft& cited = drafts[t];
        // Each source sentence is quoted once, so its text is verbatim only
        // in the cited opinion.
        for (int attempt = 0; attempt < 100 && !built; ++attempt) {
          const std::size_t pi = static_cast<std::size_t>(
              rng.uniform(0, static_cast<int>(cited.plain.size()) - 1));
          const std::size_t e = cited.plain[pi];
          if (cited.used[e]) continue;
          const auto& w = cited.elements[e].words;
          if (spanning) {
            if (pi + 1 >= cited.plain.size() || cited.plain[pi + 1] != e + 1 || cited.used[e + 1])
              continue;
            const auto& w2 = cited.elements[e + 1].words;
            const int a = rng.uniform(3, static_cast<int>(w.size()));
            const int b = rng.uniform(3, static_cast<int>(w2.size()));
            if (a + b < cfg.min_quote_tokens || a + b > cfg.max_quote_tokens) continue;
            std::vector<std::string> toks(w.end() - a, w.end());
            toks.insert(toks.end(), w2.begin(), w2.begin() + b);
            toks.back() = strip_final_period(toks.back());
            src.text = join(toks, 0, toks.size());
            src.junction = static_cast<std::size_t>(a);
            src.sentence_ids = {cited.sentence_index[e], cited.sentence_index[e + 1]};
            cited.used[e + 1] = true;
          } else {
            const int n = static_cast<int>(w.size());
            if (n < cfg.min_quote_tokens) continue;
            const int len = rng.uniform(cfg.min_quote_tokens, std::min(n, cfg.max_quote_tokens));
            const int start = rng.uniform(0, n - len);
            std::vector<std::string> toks(w.begin() + start, w.begin() + start + len);
            toks.back() = strip_final_period(toks.back());
            src.text = join(toks, 0, toks.size());
            src.sentence_ids = {cited.sentence_index[e]};
          }
          cited.used[e] = true;
          built = true;
        }
      }
      if (!built)
        throw Error(ErrorKind::kPrecondition, "GeneratorFailure",
                    "no unquoted sentences left for opinion " + std::to_string(d.id));
      ++times_cited[t];
      cites.insert(t);
      const Draft& cited = drafts[t];

      PlantedCitation p;
      p.citing_opinion_id = d.id;
      p.cited_opinion_id = cited.id;
      p.sentence_ids = src.sentence_ids;
      p.quote = src.text;
      if (rng.chance(cfg.ellipsis_rate)) {
        std::string elided = elide(rng, src, cfg.max_elided_tokens);
        p.ellipsis = elided != src.text;
        p.quote = elided;
      }
      if (rng.chance(cfg.noise_rate)) {
        p.noise = true;
        p.quote = add_noise(rng, p.quote, cfg.char_noise);
      }
      citations.push_back({{}, citation_sentence(rng, rng.pick(kIntros), p.quote,
                                                 std::to_string(cited.id)),
                           spanning ? 2 : 1});
      corpus.truth.push_back(std::move(p));
    }

    std::stable_partition(decoys[k].begin(), decoys[k].end(),
                          [](Decoy kind) { return kind != Decoy::kMisattributed; });
    std::set<std::size_t> decoy_sources;
    for (Decoy kind : decoys[k]) {
      std::string markup;
      int sentences = 1;
      switch (kind) {
        case Decoy::kMisattributed: {
          // Quote a sentence of an opinion this one never cites, attributed
          // to an opinion it may cite.
          std::vector<std::size_t> unrelated;
          for (std::size_t t = 0; t < k; ++t)
            if (!cites.count(t) && !decoy_sources.count(t)) unrelated.push_back(t);
          if (unrelated.size() < 2) {
            markup = citation_sentence(rng, rng.pick(kIntros), random_quote(8, 20),
                                       std::to_string(drafts[0].id));
            break;
          }
          bool placed = false;
          for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
            Draft& source = drafts[rng.pick(unrelated)];
            const auto target = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(k) - 1));
            const std::size_t e = rng.pick(source.plain);
            if (drafts[target].id == source.id || source.used[e] || decoy_sources.count(target))
              continue;
            const auto& w = source.elements[e].words;
            const int len = std::min<int>(static_cast<int>(w.size()), rng.uniform(8, 20));
            std::vector<std::string> toks(w.begin(), w.begin() + len);
            toks.back() = strip_final_period(toks.back());
            const std::string quote = join(toks, 0, toks.size());
            if (contains_text(drafts[target], quote)) continue;
            source.used[e] = true;
            cites.insert(target);
            decoy_sources.insert(static_cast<std::size_t>(&source - drafts.data()));
            markup = citation_sentence(rng, rng.pick(kIntros), quote,
                                       std::to_string(drafts[target].id));
            placed = true;
          }
          if (!placed)
            markup = citation_sentence(rng, rng.pick(kIntros), random_quote(8, 20),
                                       std::to_string(drafts[0].id));
          ++corpus.decoy_quotes;
          break;
        }
        case Decoy::kScare: {
          const std::size_t target = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(k) - 1));
          markup = citation_sentence(rng, "The so-called", random_quote(2, 3),
                                     std::to_string(drafts[target].id));
          cites.insert(target);
          ++corpus.decoy_quotes;
          break;
        }
        case Decoy::kRandom: {
          const std::size_t target = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(k) - 1));
          markup = citation_sentence(rng, rng.pick(kIntros), random_quote(6, 14),
                                     std::to_string(drafts[target].id));
          cites.insert(target);
          ++corpus.decoy_quotes;
          break;
        }
        case Decoy::kMissing:
          markup = citation_sentence(rng, rng.pick(kIntros), random_quote(6, 14),
                                     std::to_string(cfg.first_id + cfg.opinions + 1000 +
                                                    corpus.missing_citations));
          ++corpus.missing_citations;
          break;
        case Decoy::kSelf:
          markup = citation_sentence(rng, rng.pick(kIntros), random_quote(6, 14),
                                     std::to_string(d.id));
          ++corpus.self_citations;
          break;
        case Decoy::kMalformed:
          markup = citation_sentence(rng, rng.pick(kIntros), random_quote(6, 14),
                                     std::to_string(rng.uniform(10, 99)) + "a");
          ++corpus.malformed_citations;
          break;
      }
      citations.push_back({{}, markup, sentences});
    }

    // Interleave citation sentences among the plain ones.
    std::shuffle(citations.begin(), citations.end(), rng.engine());
    for (Element& c : citations) {
      const auto pos = static_cast<std::size_t>(
          rng.uniform(1, static_cast<int>(d.elements.size())));
      d.elements.insert(d.elements.begin() + static_cast<std::ptrdiff_t>(pos), std::move(c));
    }

    std::int64_t next = 0;
    for (std::size_t e = 0; e < d.elements.size(); ++e) {
      d.sentence_index.push_back(next);
      next += d.elements[e].sentences;
      if (d.elements[e].markup.empty()) d.plain.push_back(e);
    }
    d.used.assign(d.elements.size(), false);
    corpus.sentence_counts[d.id] = next;
  }

  // Markup: paragraphs of up to eight sentences.
  for (const Draft& d : drafts) {
    std::string html;
    for (std::size_t e = 0; e < d.elements.size(); ++e) {
      if (e % 8 == 0) html += e == 0 ? "<p>" : "</p>\n<p>";
      else html += ' ';
      const Element& el = d.elements[e];
      html += el.markup.empty() ? join(el.words, 0, el.words.size()) : el.markup;
    }
    html += "</p>";
    corpus.documents.push_back({d.id, std::move(html)});
  }
  return corpus;
}

records::Json to_json(const RawDocument& doc) {
  Json j;
  j["opinion_id"] = doc.opinion_id;
  j["html"] = doc.markup;
  return j;
}

records::Json to_json(const PlantedCitation& p) {
  Json j;
  j["citing_opinion_id"] = p.citing_opinion_id;
  j["cited_opinion_id"] = p.cited_opinion_id;
  j["sentence_ids"] = p.sentence_ids;
  j["quote"] = p.quote;
  j["ellipsis"] = p.ellipsis;
  j["noise"] = p.noise;
  return j;
}

std::vector<PlantedCitation> read_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "IoError", "cannot open " + path);
  std::vector<PlantedCitation> out;
  records::for_each_line(in, path, [&](const Json& j, std::int64_t line) {
    try {
      PlantedCitation p;
      p.citing_opinion_id = j.at("citing_opinion_id").get<std::int64_t>();
      p.cited_opinion_id = j.at("cited_opinion_id").get<std::int64_t>();
      p.sentence_ids = j.at("sentence_ids").get<std::vector<std::int64_t>>();
      p.quote = j.at("quote").get<std::string>();
      p.ellipsis = j.at("ellipsis").get<bool>();
      p.noise = j.at("noise").get<bool>();
      out.push_back(std::move(p));
    } catch (const Json::exception& e) {
      throw Error(ErrorKind::kSchema, "SchemaError",
                  "line " + std::to_string(line) + ": " + e.what());
    }
  });
  return out;
}

void write_corpus(const std::string& path, const std::vector<RawDocument>& docs) {
  std::vector<Json> rows;
  for (const RawDocument& d : docs) rows.push_back(to_json(d));
  records::write_lines(path, rows);
}

void write_truth(const std::string& path, const std::vector<PlantedCitation>& truth) {
  std::vector<Json> rows;
  for (const PlantedCitation& p : truth) rows.push_back(to_json(p));
  records::write_lines(path, rows);
}

CentralCorpus make_central_corpus(const CentralCorpusConfig& cfg) {
  Rng rng(cfg.seed);
  const auto& vocab = vocabulary();
  CentralCorpus out;
  for (int k = 0; k < cfg.opinions; ++k) {
    const OpinionId id = cfg.first_id + k;
    std::vector<std::string> topic;
    while (static_cast<int>(topic.size()) < cfg.topic_words) {
      const std::string& w = rng.pick(vocab);
      if (std::find(topic.begin(), topic.end(), w) == topic.end()) topic.push_back(w);
    }
    std::vector<int> ids(static_cast<std::size_t>(cfg.sentences));
    for (int s = 0; s < cfg.sentences; ++s) ids[static_cast<std::size_t>(s)] = s;
    std::shuffle(ids.begin(), ids.end(), rng.engine());
    std::set<int> central(ids.begin(), ids.begin() + cfg.central);

    std::string html = "<p>";
    for (int s = 0; s < cfg.sentences; ++s) {
      std::vector<std::string> words = plain_sentence(rng, 10, 18);
      words.back() = strip_final_period(words.back());
      if (central.count(s)) {
        for (std::size_t i = 0; i < words.size(); ++i)
          if (rng.chance(0.7)) words[i] = rng.pick(topic);
      } else {
        const int carried = rng.uniform(1, 2);
        for (int c = 0; c < carried; ++c)
          words[static_cast<std::size_t>(rng.uniform(0, static_cast<int>(words.size()) - 1))] =
              rng.pick(topic);
      }
      words.front() = capitalize(words.front());
      words.back() += '.';
      if (s > 0) html += ' ';
      html += join(words, 0, words.size());
    }
    html += "</p>";
    out.documents.push_back({id, html});
    out.highlights[id] = std::vector<std::int64_t>(central.begin(), central.end());
  }
  return out;
}

}  // namespace quotegraph::synth
