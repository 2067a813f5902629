#pragma once

#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "addrbench/address_model.hpp"
#include "addrbench/lexicons.hpp"
#include "addrbench/rng.hpp"

namespace addrbench {

// Record-level corruption policy. Defaults reproduce the published dataset
// proportions: half the records corrupted, a 7:3 one:two error ratio among
// them, and the postal digit mismatch damped so it cannot dominate.
struct InjectionPolicy {
  double p_corrupt = 0.5;
  double p_two_given_corrupt = 0.3;
  double postal_mismatch_weight = 0.2;
  std::uint64_t seed = kDefaultSeed;

  bool valid() const {
    return p_corrupt >= 0.0 && p_corrupt <= 1.0 && p_two_given_corrupt >= 0.0 &&
           p_two_given_corrupt <= 1.0 && postal_mismatch_weight > 0.0 &&
           postal_mismatch_weight <= 1.0;
  }
};

// Exactly the kinds whose applicability predicate holds for this record.
std::set<ErrorKind> applicable_errors(const AddressRecord& record,
                                      const LexiconSet& lex);

bool error_applicable(const AddressRecord& record, ErrorKind kind,
                      const LexiconSet& lex);

// Typographic corruption: swap-adjacent / delete / insert / replace chosen
// uniformly, repeated until the output sits at exactly `edit_distance` from
// the input. Whitespace is never edited and no token is ever emptied.
// Throws NotApplicableError when the text is too short.
std::string typo(std::string_view text, int edit_distance, RandomSource& rng);

// Applies one transform; returns the new record (outcome appended) plus a
// copy of the outcome. Throws NotApplicableError when the kind does not
// apply to the record.
std::pair<AddressRecord, InjectionOutcome> inject(const AddressRecord& record,
                                                  ErrorKind kind,
                                                  const LexiconSet& lex,
                                                  RandomSource& rng);

// Record-level corruption per the injection policy: with probability
// p_corrupt, injects one error (or two, with probability p_two_given_corrupt,
// targeting distinct components). Components are drawn uniformly among those
// with at least one applicable kind; kinds within a component are drawn with
// uniform weights except PostalDigitsMismatch, which is down-weighted by
// postal_mismatch_weight. Applies fewer errors when fewer components qualify.
AddressRecord corrupt(const AddressRecord& record, const InjectionPolicy& policy,
                      const LexiconSet& lex, RandomSource& rng);

// Gold labeling of the post-corruption component values. Tokens a transform
// added inherit the host component's B/I labels; omitted components
// contribute nothing.
LabeledSequence corrupted_labels(const AddressRecord& record);

}  // namespace addrbench
