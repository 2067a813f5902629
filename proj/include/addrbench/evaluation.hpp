#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "addrbench/address_model.hpp"

namespace addrbench {

// Per-component weights for the parsing score. The defaults reflect how
// heavily each component drives reference matching in a geocoder; they sum
// to 149, so a perfect parser scores 149.0.
struct ComponentWeights {
  std::array<double, kComponentCount> weights;

  static ComponentWeights defaults() {
    return {{20, 7, 45, 10, 4, 17, 1, 45}};
  }

  double operator[](ComponentLabel label) const {
    return weights[static_cast<std::size_t>(label)];
  }
  double& operator[](ComponentLabel label) {
    return weights[static_cast<std::size_t>(label)];
  }
};

struct ChunkCounts {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;

  double precision() const {
    return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
  }
  double recall() const {
    return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
  }
  double f1() const {
    const double p = precision(), r = recall();
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
  }
};

struct EvalReport {
  std::array<ChunkCounts, kComponentCount> per_component;
  ChunkCounts overall;  // micro: summed chunk counts
  double parsing_score = 0.0;
  std::size_t records = 0;
  std::size_t token_mismatches = 0;
  long long token_errors = 0;   // over aligned records; diagnostic
  long long tokens_compared = 0;
  std::vector<std::string> issues;

  const ChunkCounts& component(ComponentLabel label) const {
    return per_component[static_cast<std::size_t>(label)];
  }
  double macro_f1() const;
  double token_accuracy() const {
    return tokens_compared == 0
               ? 0.0
               : 1.0 - static_cast<double>(token_errors) / tokens_compared;
  }

  // Metrics rounded to five decimal places.
  nlohmann::json to_json(const ComponentWeights& weights,
                         bool include_token_metrics = false) const;
  void print_table(std::ostream& out, const ComponentWeights& weights) const;
};

// Exact-span chunk scoring: a predicted chunk is a true positive iff a gold
// chunk with identical (start, end, label) exists. Pairs must have equal
// token counts; a mismatch throws AlignmentError naming the record.
EvalReport chunk_prf(const std::vector<LabeledSequence>& gold,
                     const std::vector<LabeledSequence>& pred);

// Sum over components of weight x F1. Components with no chunks anywhere
// score 0 and are reported on the warning stream.
double parsing_score(const EvalReport& report, const ComponentWeights& weights,
                     std::ostream* warnings = nullptr);

using ParseFn = std::function<LabeledSequence(const std::string& text)>;

// Runs the parser over each gold record's text (tokens joined by spaces).
// Records whose predicted token count differs are scored all-FN/all-FP and
// tallied in token_mismatches; parser exceptions are collected, not fatal.
EvalReport evaluate_parser(const ParseFn& parser,
                           const std::vector<LabeledSequence>& gold,
                           const ComponentWeights& weights);

struct Chunk {
  std::size_t start = 0;
  std::size_t end = 0;  // inclusive
  ComponentLabel label = ComponentLabel::HouseNumber;

  auto operator<=>(const Chunk&) const = default;
};

// Maximal B/I spans per component (a stray I opens a new chunk).
std::vector<Chunk> extract_chunks(const LabeledSequence& seq);

}  // namespace addrbench
