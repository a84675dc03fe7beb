#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "quotegraph/corpus.hpp"
#include "utf8.hpp"

namespace quotegraph {

namespace {

bool is_ascii(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

bool ascii_alnum(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

// Closing punctuation allowed between a terminal mark and the whitespace
// that ends a sentence.
bool is_closer(char32_t cp) {
  switch (cp) {
    case U'"': case U'\'': case U')': case U']':
    case U'”': case U'’': case U'»':
      return true;
    default:
      return false;
  }
}

bool is_opener(char32_t cp) {
  switch (cp) {
    case U'"': case U'\'': case U'(': case U'[':
    case U'“': case U'‘': case U'«':
      return true;
    default:
      return false;
  }
}

bool starts_sentence(char32_t cp) {
  if (cp == U'"' || cp == U'\'' || cp == U'“' || cp == U'‘' ||
      cp == U'«')
    return true;
  return u_isupper(static_cast<UChar32>(cp)) || u_isdigit(static_cast<UChar32>(cp));
}

// "U.S.", "S.E.", "L.L.", "e.g.", and single initials such as "J.".
bool is_initialism(std::string_view w) {
  if (w.size() < 2 || w.size() % 2 != 0) return false;
  for (std::size_t i = 0; i < w.size(); i += 2) {
    if (!std::isalpha(static_cast<unsigned char>(w[i])) || w[i + 1] != '.')
      return false;
  }
  return true;
}

bool is_abbreviation(std::string_view word) {
  // Drop opening punctuation hugging the word.
  std::size_t pos = 0;
  while (pos < word.size()) {
    std::size_t next = pos;
    char32_t cp = utf8::decode(word, next);
    if (!is_opener(cp)) break;
    pos = next;
  }
  word.remove_prefix(pos);
  if (word.empty()) return false;
  if (is_initialism(word)) return true;
  const auto& list = default_abbreviations();
  return std::find(list.begin(), list.end(), word) != list.end();
}

}  // namespace

const std::vector<std::string>& default_abbreviations() {
  static const std::vector<std::string> kList = {
      "v.",     "vs.",   "No.",    "Nos.",  "no.",    "Inc.",   "Co.",
      "Corp.",  "Ltd.",  "Bros.",  "Ass'n.", "Dept.", "Va.",    "Md.",
      "Pa.",    "Cal.",  "Fla.",   "Ga.",   "Ill.",   "Mass.",  "Mich.",
      "Minn.",  "Tex.",  "Wash.",  "Wis.",  "Ala.",   "Ariz.",  "Ark.",
      "Colo.",  "Conn.", "Del.",   "Ind.",  "Kan.",   "Ky.",    "La.",
      "Miss.",  "Mo.",   "Mont.",  "Neb.",  "Nev.",   "Okla.",  "Or.",
      "Tenn.",  "Vt.",   "Wyo.",   "Stat.", "Rev.",   "Supp.",  "App.",
      "Cir.",   "Ct.",   "Dist.",  "So.",   "2d.",    "3d.",    "Ann.",
      "Art.",   "Sec.",  "Secs.",  "sec.",  "para.",  "subd.",  "ch.",
      "cl.",    "Const.", "Amend.", "Mr.",  "Mrs.",   "Ms.",    "Dr.",
      "Jr.",    "Sr.",   "St.",    "Id.",   "id.",    "cf.",    "Cf.",
      "et.",    "al.",   "Gen.",   "Jan.",  "Feb.",   "Mar.",   "Apr.",
      "Jun.",   "Jul.",  "Aug.",   "Sept.", "Sep.",   "Oct.",   "Nov.",
      "Dec.",   "Comm'n.", "Civ.", "Crim.", "Proc.",  "Evid.",  "R.",
      "Tit.",   "pp.",   "p.",     "n.",    "nn.",    "ed.",    "eds.",
      "Hon.",   "Mt.",   "Ave.",   "U.S.C.", "F.Supp.", "F.2d.", "F.3d."};
  return kList;
}

std::size_t codepoint_count(std::string_view utf8) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < utf8.size();) {
    utf8::decode(utf8, i);
    ++n;
  }
  return n;
}

std::u32string to_u32(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  for (std::size_t i = 0; i < utf8.size();) out.push_back(utf8::decode(utf8, i));
  return out;
}

std::string normalize_token(std::string_view surface) {
  if (is_ascii(surface)) {
    std::size_t b = 0, e = surface.size();
    while (b < e && !ascii_alnum(surface[b])) ++b;
    while (e > b && !ascii_alnum(surface[e - 1])) --e;
    std::string out(surface.substr(b, e - b));
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
  }
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(surface.data(), static_cast<int32_t>(surface.size())));
  if (U_SUCCESS(status)) {
    icu::UnicodeString composed = nfc->normalize(text, status);
    if (U_SUCCESS(status)) text = composed;
  }
  text.toLower(icu::Locale::getRoot());
  int32_t b = 0, e = text.length();
  while (b < e && !u_isalnum(text.char32At(b))) b = text.moveIndex32(b, 1);
  while (e > b) {
    int32_t prev = text.moveIndex32(e, -1);
    if (u_isalnum(text.char32At(prev))) break;
    e = prev;
  }
  std::string out;
  text.tempSubStringBetween(b, e).toUTF8String(out);
  return out;
}

std::vector<Span> tokenize_words(std::string_view text) {
  std::vector<Span> words;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && utf8::is_space(text[i])) ++i;
    if (i >= n) break;
    std::size_t start = i;
    while (i < n && !utf8::is_space(text[i])) ++i;
    words.push_back({start, i});
  }
  return words;
}

std::vector<Span> split_sentences(std::string_view text) {
  std::vector<Span> out;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n && utf8::is_space(text[i])) ++i;
  std::size_t sentence_start = i;

  while (i < n) {
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < n && (text[j] == '.' || text[j] == '!' || text[j] == '?')) ++j;
    const bool single_period = (c == '.' && j == i + 1);
    while (j < n) {
      std::size_t next = j;
      char32_t cp = utf8::decode(text, next);
      if (!is_closer(cp)) break;
      j = next;
    }
    if (j >= n || !utf8::is_space(text[j])) {
      i = j;
      continue;
    }
    std::size_t k = j;
    while (k < n && utf8::is_space(text[k])) ++k;
    if (k >= n) break;
    std::size_t probe = k;
    if (!starts_sentence(utf8::decode(text, probe))) {
      i = k;
      continue;
    }
    if (single_period) {
      std::size_t word_start = i;
      while (word_start > sentence_start && !utf8::is_space(text[word_start - 1]))
        --word_start;
      if (is_abbreviation(text.substr(word_start, i + 1 - word_start))) {
        i = k;
        continue;
      }
    }
    out.push_back({sentence_start, j});
    sentence_start = k;
    i = k;
  }
  if (sentence_start < n) {
    std::size_t end = n;
    while (end > sentence_start && utf8::is_space(text[end - 1])) --end;
    if (end > sentence_start) out.push_back({sentence_start, end});
  }
  return out;
}

}  // namespace quotegraph
