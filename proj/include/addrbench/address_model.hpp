#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace addrbench {

// The eight USPS address components, in canonical left-to-right order.
enum class ComponentLabel : std::uint8_t {
  HouseNumber = 0,
  Predirectional,
  StreetBaseName,
  RoadType,
  Postdirectional,
  City,
  State,
  PostalCode,
};

inline constexpr std::size_t kComponentCount = 8;

inline constexpr std::array<ComponentLabel, kComponentCount> kAllComponents = {
    ComponentLabel::HouseNumber,    ComponentLabel::Predirectional,
    ComponentLabel::StreetBaseName, ComponentLabel::RoadType,
    ComponentLabel::Postdirectional, ComponentLabel::City,
    ComponentLabel::State,          ComponentLabel::PostalCode,
};

// Tag-style name, e.g. "STREETBASENAME".
std::string_view component_name(ComponentLabel label);
std::optional<ComponentLabel> component_from_name(std::string_view name);

// One of the catalogued input corruptions, grouped by target component.
// StreetTypoEd1/StreetTypoEd2 (and the city pair) are distinct variants of
// the same catalogue entry, which is why 23 enumerators cover a catalogue
// of 21 error/variation types.
enum class ErrorKind : std::uint8_t {
  HouseNumberOmission = 0,
  PredirectionalOmission,
  PostdirectionalOmission,
  DirectionalSwap,
  StreetTypoEd1,
  StreetTypoEd2,
  NumberSuffixOmission,
  SpanishPrefixOmission,
  StreetSpaceOmission,
  StreetSpaceAddition,
  StreetPartialAbbreviation,
  RoadTypeOmission,
  RoadTypeValidSubstitution,
  RoadTypeInvalidSubstitution,
  CityOmission,
  CityTypoEd1,
  CityTypoEd2,
  CityDirectionAddition,
  CityDirectionOmission,
  CityFirstCharAbbreviation,
  CitySpaceAddition,
  StateOmission,
  PostalOmission,
  PostalDigitsMismatch,
};

inline constexpr std::size_t kErrorKindCount = 24;

std::string_view error_kind_name(ErrorKind kind);
std::optional<ErrorKind> error_kind_from_name(std::string_view name);

// Component a kind manipulates. DirectionalSwap rearranges the directional
// pair; it is filed under Predirectional.
ComponentLabel target_component(ErrorKind kind);

// Audit record of one applied transform. `before`/`after` hold the target
// component's full value; omissions leave `after` empty. DirectionalSwap
// encodes the pair as "<pre>|<post>".
struct InjectionOutcome {
  ErrorKind kind = ErrorKind::HouseNumberOmission;
  ComponentLabel component = ComponentLabel::HouseNumber;
  std::string before;
  std::string after;

  bool operator==(const InjectionOutcome&) const = default;
};

// One segmented US address. Component values, when present, are non-empty,
// single-spaced, and hold one or more whitespace-separated words. Ground
// truth records carry no outcomes and always have a street base name.
struct AddressRecord {
  std::string id;
  std::array<std::optional<std::string>, kComponentCount> components;
  std::vector<InjectionOutcome> injected_outcomes;

  const std::optional<std::string>& component(ComponentLabel label) const {
    return components[static_cast<std::size_t>(label)];
  }
  std::optional<std::string>& component(ComponentLabel label) {
    return components[static_cast<std::size_t>(label)];
  }
  bool has(ComponentLabel label) const { return component(label).has_value(); }

  bool operator==(const AddressRecord&) const = default;
};

// Returns a description of the first violated record invariant, or nullopt.
// Ground-truth ingestion passes require_street = true.
std::optional<std::string> record_violation(const AddressRecord& record,
                                            bool require_street);

struct IOBTag {
  enum class Prefix : std::uint8_t { B, I, O };

  Prefix prefix = Prefix::O;
  ComponentLabel label = ComponentLabel::HouseNumber;  // meaningful iff prefix != O

  static IOBTag b(ComponentLabel l) { return {Prefix::B, l}; }
  static IOBTag i(ComponentLabel l) { return {Prefix::I, l}; }
  static IOBTag o() { return {Prefix::O, ComponentLabel::HouseNumber}; }

  bool is_outside() const { return prefix == Prefix::O; }

  bool operator==(const IOBTag& other) const {
    if (prefix != other.prefix) return false;
    return is_outside() || label == other.label;
  }

  // "B-CITY", "I-STREETBASENAME", "O".
  std::string to_string() const;
  static std::optional<IOBTag> parse(std::string_view text);
};

struct LabeledSequence {
  std::vector<std::string> tokens;
  std::vector<IOBTag> tags;

  bool operator==(const LabeledSequence&) const = default;
};

// Present component values joined by single spaces in canonical order.
// Throws EmptyRecordError when nothing is present. Never emits punctuation.
std::string render(const AddressRecord& record);

// IOB labeling of render(record): each component's first word gets B-<label>,
// the rest I-<label>. Canonical records never produce O.
LabeledSequence gold_labels(const AddressRecord& record);

// True iff every I-X is immediately preceded by B-X or I-X of the same X.
bool validate_iob(const std::vector<IOBTag>& tags);
bool validate_iob(const LabeledSequence& seq);

// Whitespace tokenization with commas split off as standalone tokens.
std::vector<std::string> tokenize(std::string_view text);

// Inverse of gold_labels: rebuilds component text from B/I spans. Multiple
// spans with the same label concatenate with single spaces.
std::map<ComponentLabel, std::string> components_from_labels(
    const LabeledSequence& seq);

// Splits a normalized value on single spaces.
std::vector<std::string> split_words(std::string_view value);

}  // namespace addrbench
