#include "addrbench/error_injector.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "addrbench/errors.hpp"

namespace addrbench {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

const std::string& value_of(const AddressRecord& r, ComponentLabel label) {
  return *r.component(label);
}

// --- typo machinery -------------------------------------------------------

// Optimal string alignment distance over swap-adjacent/insert/delete/replace.
// Internal consistency check for the generator; the test suite carries its
// own independently written oracle.
std::size_t osa_distance(std::string_view a, std::string_view b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<std::size_t>> d(n + 1,
                                          std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
      }
    }
  }
  return d[n][m];
}

// Length of the whitespace-delimited token containing position i.
std::size_t token_length_at(std::string_view s, std::size_t i) {
  std::size_t lo = i, hi = i;
  while (lo > 0 && s[lo - 1] != ' ') --lo;
  while (hi + 1 < s.size() && s[hi + 1] != ' ') ++hi;
  return hi - lo + 1;
}

char cased_letter(RandomSource& rng, bool upper) {
  const char c = static_cast<char>('a' + rng.uniform_index(26));
  return upper ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
               : c;
}

bool upper_context(std::string_view s, std::size_t insert_pos) {
  if (insert_pos > 0 && s[insert_pos - 1] != ' ')
    return std::isupper(static_cast<unsigned char>(s[insert_pos - 1])) != 0;
  if (insert_pos < s.size() && s[insert_pos] != ' ')
    return std::isupper(static_cast<unsigned char>(s[insert_pos])) != 0;
  return false;
}

// One uniformly chosen atomic edit; empty optional when the drawn edit type
// has no valid site in this string.
std::optional<std::string> apply_one_edit(std::string_view s,
                                          RandomSource& rng) {
  const std::uint64_t op = rng.uniform_index(4);
  std::vector<std::size_t> sites;
  switch (op) {
    case 0: {  // swap adjacent
      for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] != ' ' && s[i + 1] != ' ' && s[i] != s[i + 1])
          sites.push_back(i);
      }
      if (sites.empty()) return std::nullopt;
      const std::size_t i = sites[rng.uniform_index(sites.size())];
      std::string out(s);
      std::swap(out[i], out[i + 1]);
      return out;
    }
    case 1: {  // delete
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != ' ' && token_length_at(s, i) >= 2) sites.push_back(i);
      }
      if (sites.empty()) return std::nullopt;
      const std::size_t i = sites[rng.uniform_index(sites.size())];
      std::string out(s);
      out.erase(i, 1);
      return out;
    }
    case 2: {  // insert
      const std::size_t pos = rng.uniform_index(s.size() + 1);
      std::string out(s);
      out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos),
                 cased_letter(rng, upper_context(s, pos)));
      return out;
    }
    default: {  // replace
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != ' ') sites.push_back(i);
      }
      if (sites.empty()) return std::nullopt;
      const std::size_t i = sites[rng.uniform_index(sites.size())];
      std::string out(s);
      const bool upper = std::isupper(static_cast<unsigned char>(s[i])) != 0;
      char c;
      do {
        c = cased_letter(rng, upper);
      } while (c == s[i]);
      out[i] = c;
      return out;
    }
  }
}

bool tokens_intact(std::string_view s) {
  // No empty token: no leading/trailing space, no double space.
  if (s.empty()) return false;
  if (s.front() == ' ' || s.back() == ' ') return false;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i] == ' ' && s[i + 1] == ' ') return false;
  }
  return true;
}

// Deterministic fallback: scan replacement candidates until one sits at the
// exact distance. Reached only if rejection sampling is absurdly unlucky.
std::string exact_distance_by_replacement(std::string_view text, int ed) {
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != ' ') positions.push_back(i);
  }
  auto letters_at = [&](std::size_t pos) {
    std::vector<char> out;
    const bool upper =
        std::isupper(static_cast<unsigned char>(text[pos])) != 0;
    for (char c = 'a'; c <= 'z'; ++c) {
      const char cc =
          upper ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
                : c;
      if (cc != text[pos]) out.push_back(cc);
    }
    return out;
  };
  if (ed == 1) {
    for (std::size_t i : positions) {
      for (char c : letters_at(i)) {
        std::string cand(text);
        cand[i] = c;
        if (osa_distance(text, cand) == 1) return cand;
      }
    }
  } else {
    for (std::size_t a = 0; a < positions.size(); ++a) {
      for (std::size_t b = a + 1; b < positions.size(); ++b) {
        for (char ca : letters_at(positions[a])) {
          for (char cb : letters_at(positions[b])) {
            std::string cand(text);
            cand[positions[a]] = ca;
            cand[positions[b]] = cb;
            if (osa_distance(text, cand) == 2) return cand;
          }
        }
      }
    }
  }
  throw NotApplicableError("typo: no candidate at requested edit distance");
}

// --- per-kind helpers ------------------------------------------------------

std::vector<std::size_t> splittable_word_indices(
    const std::vector<std::string>& words) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i].size() >= 4) out.push_back(i);
  }
  return out;
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

// "Memory Hill" -> "Memoryhill": a title-case continuation loses its capital
// when glued on; all-caps and lowercase words are glued verbatim.
std::string glue_words(const std::string& first, const std::string& second) {
  std::string tail = second;
  if (!tail.empty() && std::isupper(static_cast<unsigned char>(tail[0]))) {
    const bool rest_lower =
        std::all_of(tail.begin() + 1, tail.end(), [](unsigned char c) {
          return !std::isalpha(c) || std::islower(c);
        });
    if (rest_lower && tail.size() > 1) {
      tail[0] =
          static_cast<char>(std::tolower(static_cast<unsigned char>(tail[0])));
    }
  }
  return first + tail;
}

std::string split_word_at(const std::string& word, std::size_t pos) {
  std::string head = word.substr(0, pos);
  std::string tail = word.substr(pos);
  if (std::isupper(static_cast<unsigned char>(word[0]))) {
    tail[0] =
        static_cast<char>(std::toupper(static_cast<unsigned char>(tail[0])));
  }
  return head + " " + tail;
}

std::vector<std::size_t> partial_abbr_indices(
    const std::vector<std::string>& words, const LexiconSet& lex) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (lex.has_partial_abbreviation(words[i])) out.push_back(i);
  }
  return out;
}

}  // namespace

bool error_applicable(const AddressRecord& r, ErrorKind kind,
                      const LexiconSet& lex) {
  using CL = ComponentLabel;
  auto present = [&](CL label) { return r.has(label); };
  auto words_of = [&](CL label) { return split_words(value_of(r, label)); };
  switch (kind) {
    case ErrorKind::HouseNumberOmission:
      return present(CL::HouseNumber);
    case ErrorKind::PredirectionalOmission:
      return present(CL::Predirectional);
    case ErrorKind::PostdirectionalOmission:
      return present(CL::Postdirectional);
    case ErrorKind::DirectionalSwap: {
      if (!present(CL::Predirectional) && !present(CL::Postdirectional))
        return false;
      const auto& pre = r.component(CL::Predirectional);
      const auto& post = r.component(CL::Postdirectional);
      // A swap of equal directionals would be invisible.
      return !(pre && post && equals_ci(*pre, *post));
    }
    case ErrorKind::StreetTypoEd1:
      return present(CL::StreetBaseName) &&
             value_of(r, CL::StreetBaseName).size() >= 2;
    case ErrorKind::StreetTypoEd2:
      return present(CL::StreetBaseName) &&
             value_of(r, CL::StreetBaseName).size() >= 3;
    case ErrorKind::NumberSuffixOmission:
      return present(CL::StreetBaseName) &&
             lex.is_number_with_ordinal_suffix(value_of(r, CL::StreetBaseName));
    case ErrorKind::SpanishPrefixOmission: {
      if (!present(CL::StreetBaseName)) return false;
      const auto words = words_of(CL::StreetBaseName);
      return words.size() >= 2 && lex.is_spanish_prefix(words.front());
    }
    case ErrorKind::StreetSpaceOmission:
      return present(CL::StreetBaseName) &&
             words_of(CL::StreetBaseName).size() >= 2;
    case ErrorKind::StreetSpaceAddition:
      return present(CL::StreetBaseName) &&
             !splittable_word_indices(words_of(CL::StreetBaseName)).empty();
    case ErrorKind::StreetPartialAbbreviation:
      return present(CL::StreetBaseName) &&
             !partial_abbr_indices(words_of(CL::StreetBaseName), lex).empty();
    case ErrorKind::RoadTypeOmission:
    case ErrorKind::RoadTypeValidSubstitution:
    case ErrorKind::RoadTypeInvalidSubstitution:
      return present(CL::RoadType);
    case ErrorKind::CityOmission:
      return present(CL::City);
    case ErrorKind::CityTypoEd1:
      return present(CL::City) && value_of(r, CL::City).size() >= 2;
    case ErrorKind::CityTypoEd2:
      return present(CL::City) && value_of(r, CL::City).size() >= 3;
    case ErrorKind::CityDirectionAddition: {
      if (!present(CL::City)) return false;
      const auto words = words_of(CL::City);
      return !lex.is_directional(words.front());
    }
    case ErrorKind::CityDirectionOmission: {
      if (!present(CL::City)) return false;
      const auto words = words_of(CL::City);
      return words.size() >= 2 && lex.is_directional_full(words.front());
    }
    case ErrorKind::CityFirstCharAbbreviation:
      return present(CL::City) && words_of(CL::City).size() >= 2;
    case ErrorKind::CitySpaceAddition:
      return present(CL::City) &&
             !splittable_word_indices(words_of(CL::City)).empty();
    case ErrorKind::StateOmission:
      return present(CL::State);
    case ErrorKind::PostalOmission:
      return present(CL::PostalCode);
    case ErrorKind::PostalDigitsMismatch:
      return present(CL::PostalCode) &&
             value_of(r, CL::PostalCode).size() == 5 &&
             all_digits(value_of(r, CL::PostalCode));
  }
  return false;
}

std::set<ErrorKind> applicable_errors(const AddressRecord& record,
                                      const LexiconSet& lex) {
  std::set<ErrorKind> out;
  for (std::size_t i = 0; i < kErrorKindCount; ++i) {
    const auto kind = static_cast<ErrorKind>(i);
    if (error_applicable(record, kind, lex)) out.insert(kind);
  }
  return out;
}

std::string typo(std::string_view text, int edit_distance, RandomSource& rng) {
  if (edit_distance < 1 || edit_distance > 2)
    throw NotApplicableError("typo: edit distance must be 1 or 2");
  if (text.size() < static_cast<std::size_t>(edit_distance) + 1)
    throw NotApplicableError("typo: text too short for requested distance");
  for (int attempt = 0; attempt < 256; ++attempt) {
    std::string cand(text);
    bool ok = true;
    for (int k = 0; k < edit_distance && ok; ++k) {
      std::optional<std::string> edited;
      for (int redraw = 0; redraw < 16 && !edited; ++redraw)
        edited = apply_one_edit(cand, rng);
      if (!edited) {
        ok = false;
        break;
      }
      cand = std::move(*edited);
    }
    if (!ok || cand == text || !tokens_intact(cand)) continue;
    if (osa_distance(text, cand) != static_cast<std::size_t>(edit_distance))
      continue;
    return cand;
  }
  return exact_distance_by_replacement(text, edit_distance);
}

std::pair<AddressRecord, InjectionOutcome> inject(const AddressRecord& record,
                                                  ErrorKind kind,
                                                  const LexiconSet& lex,
                                                  RandomSource& rng) {
  using CL = ComponentLabel;
  if (!error_applicable(record, kind, lex))
    throw NotApplicableError(std::string("inject: ") +
                             std::string(error_kind_name(kind)) +
                             " not applicable to record " + record.id);
  AddressRecord out = record;
  const CL target = target_component(kind);

  auto simple_omission = [&](CL label) {
    InjectionOutcome o{kind, target, value_of(record, label), ""};
    out.component(label).reset();
    return o;
  };
  auto set_value = [&](CL label, std::string after) {
    InjectionOutcome o{kind, target, value_of(record, label), after};
    out.component(label) = std::move(after);
    return o;
  };

  InjectionOutcome outcome;
  switch (kind) {
    case ErrorKind::HouseNumberOmission:
      outcome = simple_omission(CL::HouseNumber);
      break;
    case ErrorKind::PredirectionalOmission:
      outcome = simple_omission(CL::Predirectional);
      break;
    case ErrorKind::PostdirectionalOmission:
      outcome = simple_omission(CL::Postdirectional);
      break;
    case ErrorKind::DirectionalSwap: {
      const auto pre = record.component(CL::Predirectional);
      const auto post = record.component(CL::Postdirectional);
      out.component(CL::Predirectional) = post;
      out.component(CL::Postdirectional) = pre;
      outcome = {kind, target, pre.value_or("") + "|" + post.value_or(""),
                 post.value_or("") + "|" + pre.value_or("")};
      break;
    }
    case ErrorKind::StreetTypoEd1:
      outcome = set_value(CL::StreetBaseName,
                          typo(value_of(record, CL::StreetBaseName), 1, rng));
      break;
    case ErrorKind::StreetTypoEd2:
      outcome = set_value(CL::StreetBaseName,
                          typo(value_of(record, CL::StreetBaseName), 2, rng));
      break;
    case ErrorKind::NumberSuffixOmission: {
      const std::string& v = value_of(record, CL::StreetBaseName);
      std::size_t digits = 0;
      while (digits < v.size() &&
             std::isdigit(static_cast<unsigned char>(v[digits])))
        ++digits;
      outcome = set_value(CL::StreetBaseName, v.substr(0, digits));
      break;
    }
    case ErrorKind::SpanishPrefixOmission: {
      auto words = split_words(value_of(record, CL::StreetBaseName));
      words.erase(words.begin());
      outcome = set_value(CL::StreetBaseName, join_words(words));
      break;
    }
    case ErrorKind::StreetSpaceOmission: {
      auto words = split_words(value_of(record, CL::StreetBaseName));
      const std::size_t i = rng.uniform_index(words.size() - 1);
      words[i] = glue_words(words[i], words[i + 1]);
      words.erase(words.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      outcome = set_value(CL::StreetBaseName, join_words(words));
      break;
    }
    case ErrorKind::StreetSpaceAddition:
    case ErrorKind::CitySpaceAddition: {
      const CL label = kind == ErrorKind::StreetSpaceAddition
                           ? CL::StreetBaseName
                           : CL::City;
      auto words = split_words(value_of(record, label));
      const auto candidates = splittable_word_indices(words);
      const std::size_t w = candidates[rng.uniform_index(candidates.size())];
      // Interior split leaving both halves at least two characters long.
      const std::size_t pos = 2 + rng.uniform_index(words[w].size() - 3);
      words[w] = split_word_at(words[w], pos);
      outcome = set_value(label, join_words(words));
      break;
    }
    case ErrorKind::StreetPartialAbbreviation: {
      auto words = split_words(value_of(record, CL::StreetBaseName));
      const auto candidates = partial_abbr_indices(words, lex);
      const std::size_t w = candidates[rng.uniform_index(candidates.size())];
      words[w] = match_case(*lex.partial_abbreviation(words[w]), words[w]);
      outcome = set_value(CL::StreetBaseName, join_words(words));
      break;
    }
    case ErrorKind::RoadTypeOmission:
      outcome = simple_omission(CL::RoadType);
      break;
    case ErrorKind::RoadTypeValidSubstitution: {
      const std::string& current = value_of(record, CL::RoadType);
      std::vector<std::string> pool;
      for (const std::string& member : lex.road_type_members()) {
        if (!equals_ci(member, current)) pool.push_back(member);
      }
      const std::string& pick = pool[rng.uniform_index(pool.size())];
      outcome = set_value(CL::RoadType, match_case(pick, current));
      break;
    }
    case ErrorKind::RoadTypeInvalidSubstitution: {
      const std::string& current = value_of(record, CL::RoadType);
      const auto words = split_words(current);
      outcome = set_value(CL::RoadType, current + " " + words.back());
      break;
    }
    case ErrorKind::CityOmission:
      outcome = simple_omission(CL::City);
      break;
    case ErrorKind::CityTypoEd1:
      outcome = set_value(CL::City, typo(value_of(record, CL::City), 1, rng));
      break;
    case ErrorKind::CityTypoEd2:
      outcome = set_value(CL::City, typo(value_of(record, CL::City), 2, rng));
      break;
    case ErrorKind::CityDirectionAddition: {
      const auto& fulls = lex.directional_fulls();
      const std::string& pick = fulls[rng.uniform_index(fulls.size())];
      const std::string& city = value_of(record, CL::City);
      outcome = set_value(CL::City, match_case(pick, city) + " " + city);
      break;
    }
    case ErrorKind::CityDirectionOmission: {
      auto words = split_words(value_of(record, CL::City));
      words.erase(words.begin());
      outcome = set_value(CL::City, join_words(words));
      break;
    }
    case ErrorKind::CityFirstCharAbbreviation: {
      const auto words = split_words(value_of(record, CL::City));
      std::string initials;
      for (const auto& w : words) {
        initials += static_cast<char>(
            std::toupper(static_cast<unsigned char>(w.front())));
      }
      outcome = set_value(CL::City, initials);
      break;
    }
    case ErrorKind::StateOmission:
      outcome = simple_omission(CL::State);
      break;
    case ErrorKind::PostalOmission:
      outcome = simple_omission(CL::PostalCode);
      break;
    case ErrorKind::PostalDigitsMismatch: {
      std::string zip = value_of(record, CL::PostalCode);
      const std::size_t k = 1 + rng.uniform_index(2);
      // k distinct positions, each replaced by a different digit.
      std::vector<std::size_t> positions = {0, 1, 2, 3, 4};
      rng.shuffle(positions);
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t pos = positions[i];
        const char old = zip[pos];
        const std::uint64_t step = rng.uniform_index(9);
        zip[pos] = static_cast<char>('0' + (old - '0' + 1 + step) % 10);
      }
      outcome = set_value(CL::PostalCode, zip);
      break;
    }
  }
  out.injected_outcomes.push_back(outcome);
  return {std::move(out), std::move(outcome)};
}

AddressRecord corrupt(const AddressRecord& record, const InjectionPolicy& policy,
                      const LexiconSet& lex, RandomSource& rng) {
  if (!record.injected_outcomes.empty())
    throw NotApplicableError("corrupt: record " + record.id +
                             " already carries outcomes");
  if (!rng.bernoulli(policy.p_corrupt)) return record;
  const int wanted = rng.bernoulli(policy.p_two_given_corrupt) ? 2 : 1;

  AddressRecord current = record;
  std::set<ComponentLabel> used;
  for (int n = 0; n < wanted; ++n) {
    const auto applicable = applicable_errors(current, lex);
    // Partition by target component, skipping components already hit.
    std::vector<ComponentLabel> components;
    std::vector<std::vector<ErrorKind>> kinds_by_component;
    for (ComponentLabel label : kAllComponents) {
      if (used.count(label)) continue;
      std::vector<ErrorKind> kinds;
      for (ErrorKind kind : applicable) {
        if (target_component(kind) == label) kinds.push_back(kind);
      }
      if (!kinds.empty()) {
        components.push_back(label);
        kinds_by_component.push_back(std::move(kinds));
      }
    }
    if (components.empty()) break;
    const std::size_t c = rng.uniform_index(components.size());
    const auto& kinds = kinds_by_component[c];

    double total = 0.0;
    std::vector<double> weights;
    weights.reserve(kinds.size());
    for (ErrorKind kind : kinds) {
      const double w = kind == ErrorKind::PostalDigitsMismatch
                           ? policy.postal_mismatch_weight
                           : 1.0;
      weights.push_back(w);
      total += w;
    }
    double draw = rng.uniform_real() * total;
    std::size_t pick = kinds.size() - 1;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      if (draw < weights[i]) {
        pick = i;
        break;
      }
      draw -= weights[i];
    }
    current = inject(current, kinds[pick], lex, rng).first;
    used.insert(components[c]);
  }
  return current;
}

LabeledSequence corrupted_labels(const AddressRecord& record) {
  return gold_labels(record);
}

}  // namespace addrbench
