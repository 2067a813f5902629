#include "addrbench/lexicons.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "addrbench/errors.hpp"

namespace addrbench {

namespace {

struct Pair {
  const char* full;
  const char* abbr;
};

constexpr Pair kDirectionals[] = {
    {"North", "N"},     {"South", "S"},     {"East", "E"},      {"West", "W"},
    {"Northeast", "NE"}, {"Northwest", "NW"}, {"Southeast", "SE"},
    {"Southwest", "SW"},
};

// Trimmed to the common USPS street-suffix abbreviations; extensible via
// the override file.
constexpr Pair kRoadTypes[] = {
    {"Alley", "Aly"},      {"Avenue", "Ave"},    {"Bend", "Bnd"},
    {"Boulevard", "Blvd"}, {"Branch", "Br"},     {"Bridge", "Brg"},
    {"Brook", "Brk"},      {"Circle", "Cir"},    {"Court", "Ct"},
    {"Cove", "Cv"},        {"Creek", "Crk"},     {"Crescent", "Cres"},
    {"Crossing", "Xing"},  {"Drive", "Dr"},      {"Expressway", "Expy"},
    {"Extension", "Ext"},  {"Freeway", "Fwy"},   {"Gardens", "Gdns"},
    {"Glen", "Gln"},       {"Grove", "Grv"},     {"Heights", "Hts"},
    {"Highway", "Hwy"},    {"Hill", "Hl"},       {"Hollow", "Holw"},
    {"Island", "Is"},      {"Junction", "Jct"},  {"Knoll", "Knl"},
    {"Lake", "Lk"},        {"Landing", "Lndg"},  {"Lane", "Ln"},
    {"Loop", "Loop"},      {"Manor", "Mnr"},     {"Meadows", "Mdws"},
    {"Mountain", "Mtn"},   {"Parkway", "Pkwy"},  {"Pass", "Pass"},
    {"Path", "Path"},      {"Pike", "Pike"},     {"Place", "Pl"},
    {"Plaza", "Plz"},      {"Point", "Pt"},      {"Ridge", "Rdg"},
    {"Road", "Rd"},        {"Route", "Rte"},     {"Run", "Run"},
    {"Spring", "Spg"},     {"Square", "Sq"},     {"Station", "Sta"},
    {"Street", "St"},      {"Terrace", "Ter"},   {"Trail", "Trl"},
    {"Valley", "Vly"},     {"View", "Vw"},       {"Village", "Vlg"},
    {"Vista", "Vis"},      {"Walk", "Walk"},     {"Way", "Way"},
};

constexpr const char* kStateCodes[] = {
    "AL", "AK", "AZ", "AR", "CA", "CO", "CT", "DE", "DC", "FL", "GA",
    "HI", "ID", "IL", "IN", "IA", "KS", "KY", "LA", "ME", "MD", "MA",
    "MI", "MN", "MS", "MO", "MT", "NE", "NV", "NH", "NJ", "NM", "NY",
    "NC", "ND", "OH", "OK", "OR", "PA", "RI", "SC", "SD", "TN", "TX",
    "UT", "VT", "VA", "WA", "WV", "WI", "WY",
};

// Droppable article words only; San/Santa are name parts, not articles.
constexpr const char* kSpanishPrefixes[] = {"La", "El", "Los",
                                            "Las", "De", "Del"};

// Common word abbreviations seen in street and place names.
constexpr Pair kPartialAbbreviations[] = {
    {"Mountain", "Mtn"}, {"Heights", "Hts"},  {"Spring", "Spg"},
    {"Springs", "Spgs"}, {"Village", "Vlg"},  {"Valley", "Vly"},
    {"Meadow", "Mdw"},   {"Meadows", "Mdws"}, {"Gardens", "Gdns"},
    {"Junction", "Jct"}, {"Landing", "Lndg"}, {"Harbor", "Hbr"},
    {"Center", "Ctr"},   {"Crossing", "Xing"}, {"Estates", "Ests"},
    {"Ranch", "Rnch"},   {"Lake", "Lk"},      {"River", "Riv"},
    {"Point", "Pt"},     {"Ridge", "Rdg"},    {"Creek", "Crk"},
    {"Forest", "Frst"},
};

constexpr const char* kOrdinalSuffixes[] = {"st", "nd", "rd", "th"};

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string to_upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return out;
}

bool equals_ci(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  }
  return true;
}

std::string match_case(std::string_view word, std::string_view reference) {
  if (reference.empty() || word.empty()) return std::string(word);
  bool all_upper = true, all_lower = true;
  for (unsigned char c : reference) {
    if (std::isalpha(c)) {
      if (std::islower(c)) all_upper = false;
      if (std::isupper(c)) all_lower = false;
    }
  }
  if (all_upper && !all_lower) return to_upper(word);
  if (all_lower && !all_upper) return to_lower(word);
  if (std::isupper(static_cast<unsigned char>(reference.front()))) {
    std::string out = to_lower(word);
    out.front() =
        static_cast<char>(std::toupper(static_cast<unsigned char>(out.front())));
    return out;
  }
  return std::string(word);
}

bool LexiconSet::is_directional(std::string_view word) const {
  return is_directional_full(word) || is_directional_abbr(word);
}

bool LexiconSet::is_directional_full(std::string_view word) const {
  return dir_full_to_abbr_.count(to_lower(word)) > 0;
}

bool LexiconSet::is_directional_abbr(std::string_view word) const {
  return dir_abbr_to_full_.count(to_lower(word)) > 0;
}

std::optional<std::string> LexiconSet::directional_abbr(
    std::string_view full) const {
  auto it = dir_full_to_abbr_.find(to_lower(full));
  if (it == dir_full_to_abbr_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> LexiconSet::directional_full(
    std::string_view abbr) const {
  auto it = dir_abbr_to_full_.find(to_lower(abbr));
  if (it == dir_abbr_to_full_.end()) return std::nullopt;
  return it->second;
}

bool LexiconSet::is_road_type(std::string_view word) const {
  return road_words_.count(to_lower(word)) > 0;
}

std::optional<std::string> LexiconSet::road_type_abbr(
    std::string_view full) const {
  auto it = road_full_to_abbr_.find(to_lower(full));
  if (it == road_full_to_abbr_.end()) return std::nullopt;
  return it->second;
}

bool LexiconSet::is_state_code(std::string_view word) const {
  return states_.count(to_lower(word)) > 0;
}

bool LexiconSet::is_spanish_prefix(std::string_view word) const {
  return spanish_.count(to_lower(word)) > 0;
}

std::optional<std::string> LexiconSet::partial_abbreviation(
    std::string_view word) const {
  auto it = partial_abbr_.find(to_lower(word));
  if (it == partial_abbr_.end()) return std::nullopt;
  return it->second;
}

bool LexiconSet::is_ordinal_suffix(std::string_view text) const {
  return ordinal_suffixes_.count(to_lower(text)) > 0;
}

bool LexiconSet::is_number_with_ordinal_suffix(std::string_view word) const {
  std::size_t i = 0;
  while (i < word.size() && std::isdigit(static_cast<unsigned char>(word[i])))
    ++i;
  if (i == 0 || i == word.size()) return false;
  return is_ordinal_suffix(word.substr(i));
}

void LexiconSet::add_directional(std::string full, std::string abbr) {
  const std::string full_lc = to_lower(full);
  const std::string abbr_lc = to_lower(abbr);
  // Keep the pair maps mutually consistent: drop any mapping either side of
  // the new pair previously participated in.
  if (auto it = dir_full_to_abbr_.find(full_lc); it != dir_full_to_abbr_.end())
    dir_abbr_to_full_.erase(to_lower(it->second));
  if (auto it = dir_abbr_to_full_.find(abbr_lc); it != dir_abbr_to_full_.end()) {
    const std::string old_full_lc = to_lower(it->second);
    dir_full_to_abbr_.erase(old_full_lc);
    std::erase_if(directional_fulls_, [&](const std::string& f) {
      return to_lower(f) == old_full_lc;
    });
  }
  dir_full_to_abbr_[full_lc] = abbr;
  dir_abbr_to_full_[abbr_lc] = full;
  bool known = std::any_of(
      directional_fulls_.begin(), directional_fulls_.end(),
      [&](const std::string& f) { return to_lower(f) == full_lc; });
  if (!known) directional_fulls_.push_back(std::move(full));
}

void LexiconSet::add_road_type(std::string full, std::string abbr) {
  road_words_.insert(to_lower(full));
  road_words_.insert(to_lower(abbr));
  road_full_to_abbr_[to_lower(full)] = abbr;
  rebuild_road_members();
}

void LexiconSet::rebuild_road_members() {
  road_members_.clear();
  std::set<std::string> seen;
  for (const auto& [full_lc, abbr] : road_full_to_abbr_) {
    if (seen.insert(to_lower(abbr)).second) road_members_.push_back(abbr);
  }
  std::sort(road_members_.begin(), road_members_.end(),
            [](const std::string& a, const std::string& b) {
              return to_lower(a) < to_lower(b);
            });
}

void LexiconSet::add_state_code(std::string code) {
  states_.insert(to_lower(code));
}

void LexiconSet::add_spanish_prefix(std::string word) {
  spanish_.insert(to_lower(word));
}

void LexiconSet::add_partial_abbreviation(std::string word, std::string abbr) {
  partial_abbr_[to_lower(word)] = std::move(abbr);
}

void LexiconSet::add_ordinal_suffix(std::string suffix) {
  ordinal_suffixes_.insert(to_lower(suffix));
}

LexiconSet load_lexicons() {
  LexiconSet lex;
  for (const Pair& p : kDirectionals) lex.add_directional(p.full, p.abbr);
  for (const Pair& p : kRoadTypes) lex.add_road_type(p.full, p.abbr);
  for (const char* code : kStateCodes) lex.add_state_code(code);
  for (const char* word : kSpanishPrefixes) lex.add_spanish_prefix(word);
  for (const Pair& p : kPartialAbbreviations)
    lex.add_partial_abbreviation(p.full, p.abbr);
  for (const char* s : kOrdinalSuffixes) lex.add_ordinal_suffix(s);
  return lex;
}

LexiconSet load_lexicons(const std::filesystem::path& override_path) {
  LexiconSet lex = load_lexicons();
  std::ifstream in(override_path);
  if (!in) {
    throw LexiconLoadError(
        "cannot open lexicon file " + override_path.string(), 0);
  }
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == '\t') {
        fields.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty() ||
        fields[1].empty()) {
      throw LexiconLoadError("malformed lexicon entry", line_no);
    }
    const std::string& category = fields[0];
    const std::string& key = fields[1];
    const std::string value = fields.size() == 3 ? fields[2] : std::string();
    const bool has_value = !value.empty();
    if (category == "directional") {
      if (!has_value)
        throw LexiconLoadError("directional entry needs a value", line_no);
      lex.add_directional(key, value);
    } else if (category == "road_type") {
      if (!has_value)
        throw LexiconLoadError("road_type entry needs a value", line_no);
      lex.add_road_type(key, value);
    } else if (category == "state_code") {
      lex.add_state_code(key);
    } else if (category == "spanish_prefix") {
      lex.add_spanish_prefix(key);
    } else if (category == "partial_abbreviation") {
      if (!has_value)
        throw LexiconLoadError("partial_abbreviation entry needs a value",
                               line_no);
      lex.add_partial_abbreviation(key, value);
    } else if (category == "ordinal_suffix") {
      lex.add_ordinal_suffix(key);
    } else {
      throw LexiconLoadError("unknown lexicon category '" + category + "'",
                             line_no);
    }
  }
  return lex;
}

}  // namespace addrbench
