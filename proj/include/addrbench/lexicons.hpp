#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace addrbench {

// Immutable dictionaries behind the error injector's applicability checks
// and the parsers' features. All lookups are case-insensitive; returned
// display forms keep the casing they were seeded or loaded with.
class LexiconSet {
 public:
  // -- directionals (bijection of 8 full words and 8 abbreviations)
  bool is_directional(std::string_view word) const;
  bool is_directional_full(std::string_view word) const;
  bool is_directional_abbr(std::string_view word) const;
  std::optional<std::string> directional_abbr(std::string_view full) const;
  std::optional<std::string> directional_full(std::string_view abbr) const;
  const std::vector<std::string>& directional_fulls() const {
    return directional_fulls_;
  }

  // -- road types
  bool is_road_type(std::string_view word) const;
  std::optional<std::string> road_type_abbr(std::string_view full) const;
  // Canonical abbreviation forms, sorted; the draw pool for substitutions.
  const std::vector<std::string>& road_type_members() const {
    return road_members_;
  }

  // -- state codes (50 states + DC)
  bool is_state_code(std::string_view word) const;
  std::size_t state_code_count() const { return states_.size(); }

  // -- spanish article prefixes
  bool is_spanish_prefix(std::string_view word) const;

  // -- partial word abbreviations (Mountain -> Mtn, ...)
  std::optional<std::string> partial_abbreviation(std::string_view word) const;
  bool has_partial_abbreviation(std::string_view word) const {
    return partial_abbreviation(word).has_value();
  }

  // -- ordinal suffixes
  bool is_ordinal_suffix(std::string_view text) const;
  // True for "5th", "21ST", ...: one or more digits followed by a suffix.
  bool is_number_with_ordinal_suffix(std::string_view word) const;

  // Mutators used by the loader; additive, case-insensitive, last write wins.
  void add_directional(std::string full, std::string abbr);
  void add_road_type(std::string full, std::string abbr);
  void add_state_code(std::string code);
  void add_spanish_prefix(std::string word);
  void add_partial_abbreviation(std::string word, std::string abbr);
  void add_ordinal_suffix(std::string suffix);

 private:
  void rebuild_road_members();

  std::map<std::string, std::string> dir_full_to_abbr_;  // lc full -> abbr
  std::map<std::string, std::string> dir_abbr_to_full_;  // lc abbr -> full
  std::vector<std::string> directional_fulls_;           // display forms
  std::map<std::string, std::string> road_full_to_abbr_; // lc full -> abbr
  std::set<std::string> road_words_;                     // lc fulls + abbrs
  std::vector<std::string> road_members_;                // display abbrs
  std::set<std::string> states_;                         // lc codes
  std::set<std::string> spanish_;                        // lc words
  std::map<std::string, std::string> partial_abbr_;      // lc word -> abbr
  std::set<std::string> ordinal_suffixes_;               // lc suffixes
};

// Built-in seed lexicons.
LexiconSet load_lexicons();

// Seed lexicons merged with a user override file. Format: UTF-8 text, one
// entry per line, `<category>TAB<key>TAB<value>`; `#` starts a comment.
// Categories: directional, road_type, state_code, spanish_prefix,
// partial_abbreviation, ordinal_suffix. Set-valued categories ignore the
// value field (it may be empty or omitted). Throws LexiconLoadError with
// the offending line number on malformed input.
LexiconSet load_lexicons(const std::filesystem::path& override_path);

// ASCII helpers shared across modules.
std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);
bool equals_ci(std::string_view a, std::string_view b);
// Re-cases `word` to match a reference token: all-upper reference produces
// an upper-cased word, title-case reference a title-cased word, all-lower a
// lower-cased word; otherwise the word is returned unchanged.
std::string match_case(std::string_view word, std::string_view reference);

}  // namespace addrbench
