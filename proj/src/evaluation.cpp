#include "addrbench/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>

#include "addrbench/errors.hpp"

namespace addrbench {

namespace {

double round5(double v) { return std::round(v * 1e5) / 1e5; }

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

void count_pair(const LabeledSequence& gold, const LabeledSequence& pred,
                std::array<ChunkCounts, kComponentCount>& per_component) {
  const auto gold_chunks = extract_chunks(gold);
  const auto pred_chunks = extract_chunks(pred);
  const std::set<Chunk> gold_set(gold_chunks.begin(), gold_chunks.end());
  const std::set<Chunk> pred_set(pred_chunks.begin(), pred_chunks.end());
  for (const Chunk& c : pred_chunks) {
    auto& counts = per_component[static_cast<std::size_t>(c.label)];
    if (gold_set.count(c))
      ++counts.tp;
    else
      ++counts.fp;
  }
  for (const Chunk& c : gold_chunks) {
    if (!pred_set.count(c))
      ++per_component[static_cast<std::size_t>(c.label)].fn;
  }
}

void finalize_overall(EvalReport& report) {
  report.overall = {};
  for (const auto& counts : report.per_component) {
    report.overall.tp += counts.tp;
    report.overall.fp += counts.fp;
    report.overall.fn += counts.fn;
  }
}

}  // namespace

std::vector<Chunk> extract_chunks(const LabeledSequence& seq) {
  std::vector<Chunk> chunks;
  const auto& tags = seq.tags;
  std::size_t i = 0;
  while (i < tags.size()) {
    if (tags[i].is_outside()) {
      ++i;
      continue;
    }
    const ComponentLabel label = tags[i].label;
    const std::size_t start = i;
    ++i;
    while (i < tags.size() && tags[i].prefix == IOBTag::Prefix::I &&
           tags[i].label == label) {
      ++i;
    }
    chunks.push_back({start, i - 1, label});
  }
  return chunks;
}

double EvalReport::macro_f1() const {
  double sum = 0.0;
  for (const auto& counts : per_component) sum += counts.f1();
  return sum / kComponentCount;
}

EvalReport chunk_prf(const std::vector<LabeledSequence>& gold,
                     const std::vector<LabeledSequence>& pred) {
  if (gold.size() != pred.size())
    throw AlignmentError("gold and prediction list sizes differ: " +
                         std::to_string(gold.size()) + " vs " +
                         std::to_string(pred.size()));
  EvalReport report;
  report.records = gold.size();
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].tokens.size() != pred[i].tokens.size())
      throw AlignmentError("record #" + std::to_string(i) +
                           ": token counts differ");
    count_pair(gold[i], pred[i], report.per_component);
    for (std::size_t t = 0; t < gold[i].tags.size(); ++t) {
      ++report.tokens_compared;
      if (!(gold[i].tags[t] == pred[i].tags[t])) ++report.token_errors;
    }
  }
  finalize_overall(report);
  return report;
}

double parsing_score(const EvalReport& report, const ComponentWeights& weights,
                     std::ostream* warnings) {
  double score = 0.0;
  for (ComponentLabel label : kAllComponents) {
    const ChunkCounts& counts = report.component(label);
    if (warnings && counts.tp + counts.fp + counts.fn == 0) {
      *warnings << "warning: no chunks for component "
                << component_name(label) << "; F1 scored as 0\n";
    }
    score += weights[label] * counts.f1();
  }
  return score;
}

EvalReport evaluate_parser(const ParseFn& parser,
                           const std::vector<LabeledSequence>& gold,
                           const ComponentWeights& weights) {
  EvalReport report;
  report.records = gold.size();
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const std::string text = join_tokens(gold[i].tokens);
    LabeledSequence pred;
    bool parsed = false;
    try {
      pred = parser(text);
      parsed = true;
    } catch (const std::exception& e) {
      report.issues.push_back("record #" + std::to_string(i) +
                              ": parser error: " + e.what());
    }
    if (parsed && pred.tokens.size() == gold[i].tokens.size()) {
      count_pair(gold[i], pred, report.per_component);
      for (std::size_t t = 0; t < gold[i].tags.size(); ++t) {
        ++report.tokens_compared;
        if (!(gold[i].tags[t] == pred.tags[t])) ++report.token_errors;
      }
    } else {
      // Misaligned output: every gold chunk is missed and every predicted
      // chunk is spurious.
      ++report.token_mismatches;
      for (const Chunk& c : extract_chunks(gold[i]))
        ++report.per_component[static_cast<std::size_t>(c.label)].fn;
      if (parsed) {
        for (const Chunk& c : extract_chunks(pred))
          ++report.per_component[static_cast<std::size_t>(c.label)].fp;
      }
    }
  }
  finalize_overall(report);
  report.parsing_score = parsing_score(report, weights, nullptr);
  return report;
}

nlohmann::json EvalReport::to_json(const ComponentWeights& weights,
                                   bool include_token_metrics) const {
  nlohmann::json components = nlohmann::json::object();
  for (ComponentLabel label : kAllComponents) {
    const ChunkCounts& counts = component(label);
    components[std::string(component_name(label))] = {
        {"tp", counts.tp},
        {"fp", counts.fp},
        {"fn", counts.fn},
        {"precision", round5(counts.precision())},
        {"recall", round5(counts.recall())},
        {"f1", round5(counts.f1())},
        {"weight", weights[label]},
    };
  }
  nlohmann::json j{
      {"records", records},
      {"token_mismatches", token_mismatches},
      {"components", components},
      {"overall",
       {{"tp", overall.tp},
        {"fp", overall.fp},
        {"fn", overall.fn},
        {"precision", round5(overall.precision())},
        {"recall", round5(overall.recall())},
        {"f1", round5(overall.f1())}}},
      {"macro_f1", round5(macro_f1())},
      {"parsing_score", round5(parsing_score)},
  };
  if (include_token_metrics) {
    j["token_accuracy"] = round5(token_accuracy());
  }
  if (!issues.empty()) j["issues"] = issues;
  return j;
}

void EvalReport::print_table(std::ostream& out,
                             const ComponentWeights& weights) const {
  out << std::left << std::setw(18) << "Component" << std::right
      << std::setw(8) << "Weight" << std::setw(11) << "Precision"
      << std::setw(11) << "Recall" << std::setw(11) << "F1" << '\n';
  out << std::string(59, '-') << '\n';
  out << std::fixed << std::setprecision(5);
  for (ComponentLabel label : kAllComponents) {
    const ChunkCounts& counts = component(label);
    out << std::left << std::setw(18) << component_name(label) << std::right
        << std::setw(8) << std::setprecision(0) << weights[label]
        << std::setprecision(5) << std::setw(11) << counts.precision()
        << std::setw(11) << counts.recall() << std::setw(11) << counts.f1()
        << '\n';
  }
  out << std::string(59, '-') << '\n';
  out << std::left << std::setw(18) << "Overall (micro)" << std::right
      << std::setw(8) << "" << std::setw(11) << overall.precision()
      << std::setw(11) << overall.recall() << std::setw(11) << overall.f1()
      << '\n';
  out << std::left << std::setw(18) << "Macro F1" << std::right << std::setw(8)
      << "" << std::setw(33) << macro_f1() << '\n';
  out << std::left << std::setw(18) << "Parsing Score" << std::right
      << std::setw(8) << "" << std::setw(33) << parsing_score << '\n';
  if (token_mismatches > 0) {
    out << "token-count mismatches: " << token_mismatches << " of " << records
        << " records\n";
  }
  out << std::defaultfloat;
}

}  // namespace addrbench
