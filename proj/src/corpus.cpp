#include "quotegraph/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <thread>
#include <unordered_set>

#include "json.hpp"

#include "quotegraph/error.hpp"
#include "utf8.hpp"

namespace quotegraph {

namespace {

constexpr std::size_t kMaxReportedLines = 100;

struct Tag {
  std::string name;
  bool closing = false;
  std::vector<std::pair<std::string, std::string>> attributes;

  const std::string* attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes)
      if (k == key) return &v;
    return nullptr;
  }
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_block_tag(const std::string& name) {
  static const std::unordered_set<std::string> kBlock = {
      "p",  "div", "br", "li", "ul", "ol", "h1", "h2", "h3", "h4",
      "h5", "h6",  "blockquote", "tr", "td", "th", "table", "pre",
      "center", "hr", "section", "article", "dd", "dt", "dl"};
  return kBlock.count(name) > 0;
}

// Parses the tag opening at markup[lt] == '<'. Returns the index one past
// '>' or npos when this is not a tag.
std::size_t parse_tag(std::string_view markup, std::size_t lt, Tag& tag) {
  std::size_t i = lt + 1;
  const std::size_t n = markup.size();
  if (i < n && markup[i] == '/') {
    tag.closing = true;
    ++i;
  }
  if (i >= n || !std::isalpha(static_cast<unsigned char>(markup[i])))
    return std::string_view::npos;
  std::size_t name_start = i;
  while (i < n && (std::isalnum(static_cast<unsigned char>(markup[i])) ||
                   markup[i] == '-' || markup[i] == ':'))
    ++i;
  tag.name = lower(markup.substr(name_start, i - name_start));
  while (i < n) {
    while (i < n && (utf8::is_space(markup[i]) || markup[i] == '/')) ++i;
    if (i >= n) return std::string_view::npos;
    if (markup[i] == '>') return i + 1;
    std::size_t key_start = i;
    while (i < n && !utf8::is_space(markup[i]) && markup[i] != '=' &&
           markup[i] != '>' && markup[i] != '/')
      ++i;
    std::string key = lower(markup.substr(key_start, i - key_start));
    while (i < n && utf8::is_space(markup[i])) ++i;
    std::string value;
    if (i < n && markup[i] == '=') {
      ++i;
      while (i < n && utf8::is_space(markup[i])) ++i;
      if (i < n && (markup[i] == '"' || markup[i] == '\'')) {
        char quote = markup[i++];
        std::size_t close = markup.find(quote, i);
        if (close == std::string_view::npos) return std::string_view::npos;
        value = std::string(markup.substr(i, close - i));
        i = close + 1;
      } else {
        std::size_t v_start = i;
        while (i < n && !utf8::is_space(markup[i]) && markup[i] != '>') ++i;
        value = std::string(markup.substr(v_start, i - v_start));
      }
    }
    if (!key.empty()) tag.attributes.emplace_back(std::move(key), std::move(value));
  }
  return std::string_view::npos;
}

bool has_class(const Tag& tag, std::string_view wanted) {
  const std::string* cls = tag.attribute("class");
  if (cls == nullptr) return false;
  std::string_view rest = *cls;
  while (!rest.empty()) {
    std::size_t sp = rest.find_first_of(" \t\n");
    std::string_view token = rest.substr(0, sp);
    if (token == wanted) return true;
    if (sp == std::string_view::npos) break;
    rest.remove_prefix(sp + 1);
  }
  return false;
}

std::optional<OpinionId> parse_positive_id(std::string_view s) {
  while (!s.empty() && utf8::is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && utf8::is_space(s.back())) s.remove_suffix(1);
  if (s.empty()) return std::nullopt;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  OpinionId value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value <= 0)
    return std::nullopt;
  return value;
}

// Appends the decoded entity starting at markup[amp] == '&' and returns the
// index after ';', or npos if it is not a recognised entity.
std::size_t decode_entity(std::string_view markup, std::size_t amp, std::string& out) {
  static const std::map<std::string, char32_t, std::less<>> kNamed = {
      {"amp", U'&'},     {"lt", U'<'},       {"gt", U'>'},
      {"quot", U'"'},    {"apos", U'\''},    {"nbsp", U' '},
      {"sect", U'§'},    {"para", U'¶'},     {"mdash", U'—'},
      {"ndash", U'–'},   {"ldquo", U'“'},    {"rdquo", U'”'},
      {"lsquo", U'‘'},   {"rsquo", U'’'},    {"hellip", U'…'},
      {"laquo", U'«'},   {"raquo", U'»'},    {"copy", U'©'},
      {"shy", 0},        {"thinsp", U' '},   {"ensp", U' '},
      {"emsp", U' '}};
  std::size_t semi = markup.find(';', amp + 1);
  if (semi == std::string_view::npos || semi - amp > 12) return std::string_view::npos;
  std::string_view body = markup.substr(amp + 1, semi - amp - 1);
  if (body.empty()) return std::string_view::npos;
  char32_t cp = 0;
  if (body[0] == '#') {
    std::string_view digits = body.substr(1);
    int base = 10;
    if (!digits.empty() && (digits[0] == 'x' || digits[0] == 'X')) {
      base = 16;
      digits.remove_prefix(1);
    }
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, base);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() ||
        v > 0x10FFFF)
      return std::string_view::npos;
    cp = v == 0xA0 ? U' ' : static_cast<char32_t>(v);
  } else {
    auto it = kNamed.find(body);
    if (it == kNamed.end()) return std::string_view::npos;
    cp = it->second;
  }
  if (cp != 0) utf8::append(out, cp);
  return semi + 1;
}

struct RawMention {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string id;
};

void strip_markup(std::string_view markup, const TagConvention& tags,
                  std::string& out, std::vector<RawMention>& mentions) {
  const std::size_t n = markup.size();
  std::size_t i = 0;
  bool in_citation = false;
  int depth = 0;
  RawMention current;

  auto soft_break = [&out] {
    if (!out.empty() && !utf8::is_space(out.back())) out.push_back('\n');
  };

  while (i < n) {
    char c = markup[i];
    if (c == '<') {
      if (markup.compare(i, 4, "<!--") == 0) {
        std::size_t close = markup.find("-->", i + 4);
        i = close == std::string_view::npos ? n : close + 3;
        continue;
      }
      if (i + 1 < n && markup[i + 1] == '!') {
        std::size_t close = markup.find('>', i);
        i = close == std::string_view::npos ? n : close + 1;
        continue;
      }
      Tag tag;
      std::size_t after = parse_tag(markup, i, tag);
      if (after == std::string_view::npos) {
        out.push_back(c);
        ++i;
        continue;
      }
      i = after;
      if (!tag.closing && (tag.name == "script" || tag.name == "style")) {
        std::string closing = "</" + tag.name;
        std::size_t close = i;
        while (true) {
          close = markup.find('<', close);
          if (close == std::string_view::npos) break;
          if (lower(markup.substr(close, closing.size())) == closing) break;
          ++close;
        }
        if (close == std::string_view::npos) {
          i = n;
        } else {
          std::size_t gt = markup.find('>', close);
          i = gt == std::string_view::npos ? n : gt + 1;
        }
        continue;
      }
      if (is_block_tag(tag.name)) soft_break();
      if (tag.name == tags.element) {
        if (in_citation) {
          depth += tag.closing ? -1 : 1;
          if (depth == 0) {
            current.end = out.size();
            mentions.push_back(std::move(current));
            current = RawMention{};
            in_citation = false;
          }
        } else if (!tag.closing && has_class(tag, tags.class_name)) {
          in_citation = true;
          depth = 1;
          current.begin = out.size();
          const std::string* id = tag.attribute(tags.id_attribute);
          current.id = id ? *id : std::string();
        }
      }
      continue;
    }
    if (c == '&') {
      std::size_t after = decode_entity(markup, i, out);
      if (after != std::string_view::npos) {
        i = after;
        continue;
      }
    }
    out.push_back(c);
    ++i;
  }
  if (in_citation) {
    current.end = out.size();
    mentions.push_back(std::move(current));
  }
}

}  // namespace

std::size_t Opinion::sentence_of_word(std::size_t i) const {
  auto it = std::upper_bound(
      sentence_words.begin(), sentence_words.end(), i,
      [](std::size_t value, const auto& range) { return value < range.first; });
  return static_cast<std::size_t>(it - sentence_words.begin()) - 1;
}

void DropReport::merge(const DropReport& other) {
  lines_read += other.lines_read;
  unparseable_lines += other.unparseable_lines;
  duplicate_ids += other.duplicate_ids;
  empty_documents += other.empty_documents;
  malformed_citation_ids += other.malformed_citation_ids;
  self_citations += other.self_citations;
  missing_cited_opinions += other.missing_cited_opinions;
  for (auto line : other.unparseable_line_numbers)
    if (unparseable_line_numbers.size() < kMaxReportedLines)
      unparseable_line_numbers.push_back(line);
}

std::optional<Opinion> parse_document(const RawDocument& raw, DropReport* report,
                                      const TagConvention& tags) {
  DropReport scratch;
  DropReport& drops = report ? *report : scratch;

  std::string text;
  std::vector<RawMention> raw_mentions;
  strip_markup(raw.markup, tags, text, raw_mentions);

  std::size_t lead = 0;
  while (lead < text.size() && utf8::is_space(text[lead])) ++lead;
  std::size_t tail = text.size();
  while (tail > lead && utf8::is_space(text[tail - 1])) --tail;
  if (tail == lead) {
    ++drops.empty_documents;
    return std::nullopt;
  }

  Opinion op;
  op.opinion_id = raw.opinion_id;
  op.plain_text = text.substr(lead, tail - lead);
  op.words = tokenize_words(op.plain_text);
  op.sentences = split_sentences(op.plain_text);

  op.sentence_words.reserve(op.sentences.size());
  std::size_t w = 0;
  for (const Span& s : op.sentences) {
    std::size_t first = w;
    while (w < op.words.size() && op.words[w].begin < s.end) ++w;
    op.sentence_words.emplace_back(first, w);
  }

  const std::size_t len = op.plain_text.size();
  auto clamp = [&](std::size_t pos) {
    return pos < lead ? 0 : std::min(pos - lead, len);
  };
  for (const RawMention& rm : raw_mentions) {
    auto id = parse_positive_id(rm.id);
    if (!id) {
      ++drops.malformed_citation_ids;
      continue;
    }
    if (*id == raw.opinion_id) {
      ++drops.self_citations;
      continue;
    }
    CitationMention m;
    m.cited_opinion_id = *id;
    m.char_span = {clamp(rm.begin), clamp(rm.end)};
    // Words ending at or before the marker start precede it.
    auto it = std::upper_bound(
        op.words.begin(), op.words.end(), m.char_span.begin,
        [](std::size_t pos, const Span& word) { return pos < word.end; });
    m.word_index = static_cast<std::int64_t>(it - op.words.begin()) - 1;
    op.mentions.push_back(m);
  }
  return op;
}

std::vector<RawDocument> read_corpus(std::istream& in, DropReport* report) {
  DropReport scratch;
  DropReport& drops = report ? *report : scratch;
  std::vector<RawDocument> docs;
  std::unordered_set<OpinionId> seen;
  std::string line;
  std::int64_t line_no = 0;
  auto reject = [&] {
    ++drops.unparseable_lines;
    if (drops.unparseable_line_numbers.size() < kMaxReportedLines)
      drops.unparseable_line_numbers.push_back(line_no);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](char c) { return utf8::is_space(c); }))
      continue;
    ++drops.lines_read;
    nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      reject();
      continue;
    }
    auto id_it = record.find("opinion_id");
    auto html_it = record.find("html");
    if (id_it == record.end() || !id_it->is_number_integer() ||
        html_it == record.end() || !html_it->is_string() ||
        id_it->get<OpinionId>() <= 0) {
      reject();
      continue;
    }
    OpinionId id = id_it->get<OpinionId>();
    if (!seen.insert(id).second) {
      ++drops.duplicate_ids;
      continue;
    }
    docs.push_back({id, html_it->get<std::string>()});
  }
  std::sort(docs.begin(), docs.end(),
            [](const RawDocument& a, const RawDocument& b) {
              return a.opinion_id < b.opinion_id;
            });
  return docs;
}

std::vector<RawDocument> read_corpus_file(const std::string& path, DropReport* report) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "IoError", "cannot open corpus file " + path);
  return read_corpus(in, report);
}

std::vector<Opinion> parse_corpus(const std::vector<RawDocument>& raws,
                                  DropReport* report, int workers,
                                  const TagConvention& tags) {
  const std::size_t n = raws.size();
  const std::size_t threads =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), n));
  std::vector<std::optional<Opinion>> parsed(n);
  std::vector<DropReport> partial(threads);
  auto run = [&](std::size_t t) {
    for (std::size_t i = t * n / threads; i < (t + 1) * n / threads; ++i)
      parsed[i] = parse_document(raws[i], &partial[t], tags);
  };
  if (threads == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(run, t);
    for (auto& th : pool) th.join();
  }
  std::vector<Opinion> out;
  out.reserve(n);
  for (auto& p : parsed)
    if (p) out.push_back(std::move(*p));
  std::sort(out.begin(), out.end(), [](const Opinion& a, const Opinion& b) {
    return a.opinion_id < b.opinion_id;
  });
  if (report)
    for (const auto& d : partial) report->merge(d);
  return out;
}

const Opinion* find_opinion(const std::vector<Opinion>& sorted, OpinionId id) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), id,
                             [](const Opinion& op, OpinionId value) {
                               return op.opinion_id < value;
                             });
  if (it == sorted.end() || it->opinion_id != id) return nullptr;
  return &*it;
}

}  // namespace quotegraph
