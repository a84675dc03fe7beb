#include "quotegraph/highlight.hpp"

#include <algorithm>
#include <map>

#include "quotegraph/error.hpp"

namespace quotegraph {

std::vector<std::size_t> align_sentences(const MatchResult& match, const Opinion& cited) {
  if (!match.matched || match.cited_token_range.first >= match.cited_token_range.second)
    throw Error(ErrorKind::kPrecondition, "NotMatched",
                "align_sentences needs a matched result with a non-empty range");
  const std::size_t first = cited.sentence_of_word(match.cited_token_range.first);
  const std::size_t last = cited.sentence_of_word(match.cited_token_range.second - 1);
  std::vector<std::size_t> out;
  for (std::size_t s = first; s <= last; ++s) out.push_back(s);
  return out;
}

std::vector<SentenceRecord> build_highlights(const std::vector<VerbatimEdge>& edges,
                                             const std::vector<Opinion>& corpus,
                                             bool emit_all,
                                             HighlightCounters* counters) {
  HighlightCounters scratch;
  HighlightCounters& counts = counters ? *counters : scratch;

  // Per cited opinion, citation count per sentence.
  std::map<OpinionId, std::vector<std::int64_t>> tallies;
  for (const VerbatimEdge& e : edges) {
    const Opinion* cited = find_opinion(corpus, e.cited_opinion_id);
    if (cited == nullptr) {
      ++counts.missing_cited_opinion;
      continue;
    }
    if (e.sentence_id < 0 ||
        static_cast<std::size_t>(e.sentence_id) >= cited->sentence_count()) {
      ++counts.invalid_sentence_id;
      continue;
    }
    auto& tally = tallies[e.cited_opinion_id];
    if (tally.empty()) tally.assign(cited->sentence_count(), 0);
    ++tally[static_cast<std::size_t>(e.sentence_id)];
  }

  std::vector<SentenceRecord> out;
  for (const Opinion& op : corpus) {
    auto it = tallies.find(op.opinion_id);
    if (it == tallies.end() && !emit_all) continue;
    for (std::size_t s = 0; s < op.sentence_count(); ++s) {
      SentenceRecord r;
      r.opinion_id = op.opinion_id;
      r.sentence_id = static_cast<std::int64_t>(s);
      r.raw_text = std::string(op.sentence(s));
      r.count_citations = it == tallies.end() ? 0 : it->second[s];
      r.highlight = r.count_citations > 0;
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace quotegraph
