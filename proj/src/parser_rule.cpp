#include "addrbench/parser_rule.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "addrbench/errors.hpp"

namespace addrbench {

namespace {

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

bool all_alpha(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalpha(c) != 0;
  });
}

}  // namespace

LabeledSequence parse_rule(std::string_view text, const RuleConfig& config) {
  const std::vector<std::string> tokens = tokenize(text);
  if (tokens.empty()) throw EmptyInputError();
  const LexiconSet& lex = config.lexicons;

  // Work over the non-comma tokens; commas stay O.
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] != ",") idx.push_back(i);
  }

  // component id per original token; -1 = O
  std::vector<int> assigned(tokens.size(), -1);
  auto claim = [&](std::size_t k, ComponentLabel label) {
    assigned[idx[k]] = static_cast<int>(label);
  };
  auto claim_range = [&](std::ptrdiff_t from, std::ptrdiff_t to,
                         ComponentLabel label) {
    for (std::ptrdiff_t k = from; k <= to; ++k)
      claim(static_cast<std::size_t>(k), label);
  };

  if (!idx.empty()) {
    std::ptrdiff_t lo = 0;
    std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(idx.size()) - 1;
    auto tok = [&](std::ptrdiff_t k) -> const std::string& {
      return tokens[idx[static_cast<std::size_t>(k)]];
    };

    // Backward anchors: a US address is least ambiguous at the tail.
    if (hi >= lo && tok(hi).size() == 5 && all_digits(tok(hi))) {
      claim(static_cast<std::size_t>(hi), ComponentLabel::PostalCode);
      --hi;
    }
    if (hi >= lo && tok(hi).size() == 2 && all_alpha(tok(hi)) &&
        (!config.strict_state_codes || lex.is_state_code(tok(hi)))) {
      claim(static_cast<std::size_t>(hi), ComponentLabel::State);
      --hi;
    }

    // Forward anchors.
    if (hi >= lo && all_digits(tok(lo))) {
      claim(static_cast<std::size_t>(lo), ComponentLabel::HouseNumber);
      ++lo;
    }
    // Directional slots only match abbreviated forms: full direction words
    // in this position are far more likely to open a street or city name
    // ("North Little Rock") than to be a directional.
    if (hi > lo && lex.is_directional_abbr(tok(lo))) {
      claim(static_cast<std::size_t>(lo), ComponentLabel::Predirectional);
      ++lo;
    }

    // Rightmost road-type token in what remains.
    std::ptrdiff_t rt = -1;
    for (std::ptrdiff_t k = hi; k >= lo; --k) {
      if (lex.is_road_type(tok(k))) {
        rt = k;
        break;
      }
    }
    if (rt >= 0) {
      claim(static_cast<std::size_t>(rt), ComponentLabel::RoadType);
      std::ptrdiff_t city_from = rt + 1;
      if (rt + 1 <= hi && lex.is_directional_abbr(tok(rt + 1))) {
        claim(static_cast<std::size_t>(rt + 1),
              ComponentLabel::Postdirectional);
        city_from = rt + 2;
      }
      claim_range(lo, rt - 1, ComponentLabel::StreetBaseName);
      claim_range(city_from, hi, ComponentLabel::City);
    } else if (hi > lo) {
      // No road type to anchor on: call the last token the city.
      claim_range(lo, hi - 1, ComponentLabel::StreetBaseName);
      claim_range(hi, hi, ComponentLabel::City);
    } else if (hi == lo) {
      claim(static_cast<std::size_t>(lo), ComponentLabel::StreetBaseName);
    }
  }

  // Emit B/I tags over the original token positions. An O token (comma)
  // closes the open chunk so the result stays IOB-valid.
  LabeledSequence seq;
  seq.tokens = tokens;
  seq.tags.reserve(tokens.size());
  int open = -2;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (assigned[i] < 0) {
      seq.tags.push_back(IOBTag::o());
      open = -2;
    } else if (assigned[i] == open) {
      seq.tags.push_back(IOBTag::i(static_cast<ComponentLabel>(assigned[i])));
    } else {
      seq.tags.push_back(IOBTag::b(static_cast<ComponentLabel>(assigned[i])));
      open = assigned[i];
    }
  }
  return seq;
}

}  // namespace addrbench
