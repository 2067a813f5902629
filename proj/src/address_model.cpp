#include "addrbench/address_model.hpp"

#include <cctype>

#include "addrbench/errors.hpp"

namespace addrbench {

namespace {

constexpr std::array<std::string_view, kComponentCount> kComponentNames = {
    "HOUSENUMBER", "PREDIRECTIONAL", "STREETBASENAME", "ROADTYPE",
    "POSTDIRECTIONAL", "CITY", "STATE", "POSTALCODE",
};

constexpr std::array<std::string_view, kErrorKindCount> kErrorKindNames = {
    "HouseNumberOmission",
    "PredirectionalOmission",
    "PostdirectionalOmission",
    "DirectionalSwap",
    "StreetTypoEd1",
    "StreetTypoEd2",
    "NumberSuffixOmission",
    "SpanishPrefixOmission",
    "StreetSpaceOmission",
    "StreetSpaceAddition",
    "StreetPartialAbbreviation",
    "RoadTypeOmission",
    "RoadTypeValidSubstitution",
    "RoadTypeInvalidSubstitution",
    "CityOmission",
    "CityTypoEd1",
    "CityTypoEd2",
    "CityDirectionAddition",
    "CityDirectionOmission",
    "CityFirstCharAbbreviation",
    "CitySpaceAddition",
    "StateOmission",
    "PostalOmission",
    "PostalDigitsMismatch",
};

constexpr std::array<ComponentLabel, kErrorKindCount> kErrorKindTargets = {
    ComponentLabel::HouseNumber,      // HouseNumberOmission
    ComponentLabel::Predirectional,   // PredirectionalOmission
    ComponentLabel::Postdirectional,  // PostdirectionalOmission
    ComponentLabel::Predirectional,   // DirectionalSwap
    ComponentLabel::StreetBaseName,   // StreetTypoEd1
    ComponentLabel::StreetBaseName,   // StreetTypoEd2
    ComponentLabel::StreetBaseName,   // NumberSuffixOmission
    ComponentLabel::StreetBaseName,   // SpanishPrefixOmission
    ComponentLabel::StreetBaseName,   // StreetSpaceOmission
    ComponentLabel::StreetBaseName,   // StreetSpaceAddition
    ComponentLabel::StreetBaseName,   // StreetPartialAbbreviation
    ComponentLabel::RoadType,         // RoadTypeOmission
    ComponentLabel::RoadType,         // RoadTypeValidSubstitution
    ComponentLabel::RoadType,         // RoadTypeInvalidSubstitution
    ComponentLabel::City,             // CityOmission
    ComponentLabel::City,             // CityTypoEd1
    ComponentLabel::City,             // CityTypoEd2
    ComponentLabel::City,             // CityDirectionAddition
    ComponentLabel::City,             // CityDirectionOmission
    ComponentLabel::City,             // CityFirstCharAbbreviation
    ComponentLabel::City,             // CitySpaceAddition
    ComponentLabel::State,            // StateOmission
    ComponentLabel::PostalCode,       // PostalOmission
    ComponentLabel::PostalCode,       // PostalDigitsMismatch
};

bool is_space_char(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

std::string_view component_name(ComponentLabel label) {
  return kComponentNames[static_cast<std::size_t>(label)];
}

std::optional<ComponentLabel> component_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kComponentCount; ++i) {
    if (kComponentNames[i] == name) return static_cast<ComponentLabel>(i);
  }
  return std::nullopt;
}

std::string_view error_kind_name(ErrorKind kind) {
  return kErrorKindNames[static_cast<std::size_t>(kind)];
}

std::optional<ErrorKind> error_kind_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kErrorKindCount; ++i) {
    if (kErrorKindNames[i] == name) return static_cast<ErrorKind>(i);
  }
  return std::nullopt;
}

ComponentLabel target_component(ErrorKind kind) {
  return kErrorKindTargets[static_cast<std::size_t>(kind)];
}

std::optional<std::string> record_violation(const AddressRecord& record,
                                            bool require_street) {
  bool any = false;
  for (ComponentLabel label : kAllComponents) {
    const auto& value = record.component(label);
    if (!value) continue;
    any = true;
    const std::string& v = *value;
    const std::string name(component_name(label));
    if (v.empty()) return name + ": present but empty";
    if (is_space_char(v.front()) || is_space_char(v.back()))
      return name + ": leading or trailing whitespace";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] != ' ' && is_space_char(v[i]))
        return name + ": non-space whitespace character";
      if (v[i] == ' ' && i + 1 < v.size() && v[i + 1] == ' ')
        return name + ": run of multiple spaces";
    }
  }
  if (!any) return "no present components";
  if (require_street && !record.has(ComponentLabel::StreetBaseName))
    return "missing street base name";
  if (record.injected_outcomes.size() > 2)
    return "more than two injected outcomes";
  return std::nullopt;
}

std::string IOBTag::to_string() const {
  switch (prefix) {
    case Prefix::O:
      return "O";
    case Prefix::B:
      return "B-" + std::string(component_name(label));
    case Prefix::I:
      return "I-" + std::string(component_name(label));
  }
  return "O";
}

std::optional<IOBTag> IOBTag::parse(std::string_view text) {
  if (text == "O") return IOBTag::o();
  if (text.size() < 3 || text[1] != '-') return std::nullopt;
  auto label = component_from_name(text.substr(2));
  if (!label) return std::nullopt;
  if (text[0] == 'B') return IOBTag::b(*label);
  if (text[0] == 'I') return IOBTag::i(*label);
  return std::nullopt;
}

std::vector<std::string> split_words(std::string_view value) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < value.size()) {
    while (i < value.size() && value[i] == ' ') ++i;
    std::size_t j = i;
    while (j < value.size() && value[j] != ' ') ++j;
    if (j > i) words.emplace_back(value.substr(i, j - i));
    i = j;
  }
  return words;
}

std::string render(const AddressRecord& record) {
  std::string out;
  for (ComponentLabel label : kAllComponents) {
    const auto& value = record.component(label);
    if (!value) continue;
    if (!out.empty()) out += ' ';
    out += *value;
  }
  if (out.empty()) throw EmptyRecordError();
  return out;
}

LabeledSequence gold_labels(const AddressRecord& record) {
  LabeledSequence seq;
  for (ComponentLabel label : kAllComponents) {
    const auto& value = record.component(label);
    if (!value) continue;
    bool first = true;
    for (auto& word : split_words(*value)) {
      seq.tokens.push_back(std::move(word));
      seq.tags.push_back(first ? IOBTag::b(label) : IOBTag::i(label));
      first = false;
    }
  }
  if (seq.tokens.empty()) throw EmptyRecordError();
  return seq;
}

bool validate_iob(const std::vector<IOBTag>& tags) {
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i].prefix != IOBTag::Prefix::I) continue;
    if (i == 0) return false;
    const IOBTag& prev = tags[i - 1];
    if (prev.is_outside() || prev.label != tags[i].label) return false;
  }
  return true;
}

bool validate_iob(const LabeledSequence& seq) { return validate_iob(seq.tags); }

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  };
  for (char c : text) {
    if (is_space_char(c)) {
      flush();
    } else if (c == ',') {
      flush();
      tokens.emplace_back(1, ',');
    } else {
      current += c;
    }
  }
  flush();
  return tokens;
}

std::map<ComponentLabel, std::string> components_from_labels(
    const LabeledSequence& seq) {
  std::map<ComponentLabel, std::string> out;
  for (std::size_t i = 0; i < seq.tokens.size() && i < seq.tags.size(); ++i) {
    const IOBTag& tag = seq.tags[i];
    if (tag.is_outside()) continue;
    std::string& value = out[tag.label];
    if (!value.empty()) value += ' ';
    value += seq.tokens[i];
  }
  return out;
}

}  // namespace addrbench
