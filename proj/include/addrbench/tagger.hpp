#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "addrbench/address_model.hpp"
#include "addrbench/lexicons.hpp"
#include "addrbench/rng.hpp"

namespace addrbench {

// 17-tag inventory: O first, then B-X/I-X per component in canonical order.
inline constexpr std::size_t kTagCount = 2 * kComponentCount + 1;

IOBTag tag_at(std::size_t index);
std::size_t tag_index(const IOBTag& tag);

// Hard IOB mask: any tag may follow with B-Y or O; I-X only after B-X/I-X.
bool transition_allowed(std::size_t from, std::size_t to);
// A sequence cannot open with I-X.
bool start_allowed(std::size_t to);

// Sparse string-keyed features, weight 1 each. Keys are namespaced (w=,
// shape=, lex=, ...) to avoid collisions.
using FeatureVector = std::vector<std::string>;

FeatureVector extract_features(std::span<const std::string> tokens,
                               std::size_t i, const LexiconSet& lex);

struct TrainConfig {
  int epochs = 25;
  std::uint64_t shuffle_seed = kDefaultSeed;
  bool averaging = true;
};

struct EpochStats {
  int epoch = 0;
  std::size_t sequence_updates = 0;
  std::size_t token_errors = 0;
  std::size_t tokens = 0;
  double token_error_rate() const {
    return tokens == 0 ? 0.0 : static_cast<double>(token_errors) / tokens;
  }
};

// Linear-chain model: per-feature emission weight rows plus a dense
// transition matrix, raw and averaged copies of both, and the hard IOB
// transition mask. Decoding uses the averaged weights (identical to raw
// when averaging was off) and can never traverse a masked transition.
class TaggerModel {
 public:
  using WeightRow = std::array<double, kTagCount>;
  using TransitionMatrix = std::array<std::array<double, kTagCount>, kTagCount>;

  TaggerModel();

  const WeightRow* decode_row(const std::string& feature) const;
  const TransitionMatrix& decode_transitions() const {
    return avg_transitions_;
  }

  double emission(const std::string& feature, std::size_t tag) const;
  double transition(std::size_t from, std::size_t to) const {
    return avg_transitions_[from][to];
  }

  // Raw (final, unaveraged) weights; round-tripped alongside the averaged.
  const std::unordered_map<std::string, WeightRow>& raw_emissions() const {
    return raw_emissions_;
  }
  const std::unordered_map<std::string, WeightRow>& averaged_emissions() const {
    return avg_emissions_;
  }
  const TransitionMatrix& raw_transitions() const { return raw_transitions_; }

  void set_weights(std::unordered_map<std::string, WeightRow> raw,
                   std::unordered_map<std::string, WeightRow> averaged,
                   const TransitionMatrix& raw_trans,
                   const TransitionMatrix& avg_trans);

  bool operator==(const TaggerModel&) const = default;

 private:
  std::unordered_map<std::string, WeightRow> raw_emissions_;
  std::unordered_map<std::string, WeightRow> avg_emissions_;
  TransitionMatrix raw_transitions_;
  TransitionMatrix avg_transitions_;
};

// Max-scoring tag path under emission+transition scores subject to the hard
// IOB mask; ties break toward the lower tag index, so decoding is
// deterministic.
LabeledSequence viterbi(std::span<const std::string> tokens,
                        const TaggerModel& model, const LexiconSet& lex);

using TrainProgress =
    std::function<void(const EpochStats&, const TaggerModel& snapshot)>;

// Averaged structured perceptron. Per epoch: shuffled pass; per sequence,
// decode with the current raw weights and on mismatch add gold feature
// counts and subtract predicted ones. The averaged weights equal the mean
// of the weight snapshots taken after each update. Throws TrainDataError on
// an invalid gold sequence.
TaggerModel train(const std::vector<LabeledSequence>& dataset,
                  const TrainConfig& config, const LexiconSet& lex,
                  const TrainProgress& progress = nullptr);

// Whitespace tokenization (commas split off) followed by viterbi.
LabeledSequence parse_tagger(std::string_view text, const TaggerModel& model,
                             const LexiconSet& lex);

// Versioned binary container; load rejects unknown versions, bad magic, and
// truncated files with ModelLoadError. Round trips preserve every weight
// and the mask exactly.
void save_model(const TaggerModel& model, const std::filesystem::path& path);
TaggerModel load_model(const std::filesystem::path& path);

}  // namespace addrbench
