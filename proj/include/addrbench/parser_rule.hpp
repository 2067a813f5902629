#pragma once

#include <string_view>

#include "addrbench/address_model.hpp"
#include "addrbench/lexicons.hpp"

namespace addrbench {

struct RuleConfig {
  LexiconSet lexicons;
  // When false, any two-letter alphabetic token in the state slot is
  // accepted, not just known codes.
  bool strict_state_codes = true;
};

// Deterministic lexicon/pattern parser. Anchors the tail first (trailing
// five-digit token -> postal code, then a state code), then scans forward
// (leading all-digit token -> house number, directional abbreviation ->
// predirectional), locates the rightmost road-type token, claims a
// directional abbreviation right after it as postdirectional, and assigns
// street/city from the remaining regions. Commas become O tokens. Every
// token receives exactly one tag and the output is always IOB-valid.
// Throws EmptyInputError on empty text.
LabeledSequence parse_rule(std::string_view text, const RuleConfig& config);

}  // namespace addrbench
