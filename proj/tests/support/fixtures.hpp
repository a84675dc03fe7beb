#pragma once

#include <string>

#include "quotegraph/corpus.hpp"

namespace fixtures {

// Citing passage around a quotation of opinion 1239944, in the corpus tag
// convention.
inline const std::string kWrightCiting =
    "<p>A special relationship that gave rise to a duty on the part of the United States to "
    "protect or warn her. There was no such special relationship between L.L. and the United "
    "States, however, and the United States motion must accordingly be granted. \"Ordinarily, "
    "the owner or possessor of land is under no duty to protect invitees from assaults by third "
    "parties while the invitee is upon the premises ... [unless] there is a special relationship "
    "between [the] possessor of land and his invitee giving rise to a duty to protect the invitee "
    "from such assaults.\" Wright v. Webb, <span class=\"citation\" "
    "data-id=\"1239944\">CITATION_1239944</span>, 920-21 (1987). Chimes submits that this is a "
    "\"special relationship\" case. The cases on which Chimes relies for that proposition "
    "presented distinct factual bases for finding a \"special relationship.\"</p>";

inline const std::string kWrightQuote =
    "Ordinarily, the owner or possessor of land is under no duty to protect invitees from "
    "assaults by third parties while the invitee is upon the premises ... [unless] there is a "
    "special relationship between [the] possessor of land and his invitee giving rise to a duty "
    "to protect the invitee from such assaults.";

// Cited opinion 1239944.
inline const std::string kWrightCited =
    "<p>We will assume, without deciding, that Webb was the Wrights' business invitee. Thus, the "
    "Wrights owed Webb the duty of ordinary care to maintain their parking lot in a reasonably "
    "safe condition. See Tate Rice, 227 Va. 341, 345, 315 S.E.2d 385, 388 (1984).</p>"
    "<p>Ordinarily, the owner or possessor of land is under no duty to protect invitees from "
    "assaults by third parties while the invitee is upon the premises. Restatement (Second) of "
    "Torts | 314A (1965) recognizes exceptions to the rule of non-liability for the assaults of "
    "a third party where there is a special relationship between a possessor of land and his "
    "invitee giving rise to a duty to protect the invitee from such assaults. We alluded to this "
    "Restatement rule in both Klingbeil Management Group Co. Vito, 233 Va. 445, 447, 357 S.E.2d "
    "200, 201 (1987) and Gulf Reston, Inc. Rogers, 215 Va. 155, 158, 207 S.E.2d 841, 844 (1974), "
    "but made it plain in Gulf Reston that this was only a reference to the Restatement rule. Our "
    "statement in Klingbeil was simply a comment upon the reference in Gulf Reston.</p>";

inline quotegraph::Opinion parse(quotegraph::OpinionId id, const std::string& html) {
  auto op = quotegraph::parse_document({id, html});
  if (!op) throw std::runtime_error("fixture did not parse");
  return *op;
}

// Plain text wrapped in a paragraph.
inline quotegraph::Opinion plain(quotegraph::OpinionId id, const std::string& text) {
  return parse(id, "<p>" + text + "</p>");
}

}  // namespace fixtures
