#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "addrbench/dataset_pipeline.hpp"
#include "addrbench/errors.hpp"
#include "addrbench/evaluation.hpp"
#include "addrbench/parser_rule.hpp"
#include "addrbench/tagger.hpp"

namespace ab = addrbench;
namespace fs = std::filesystem;

namespace {

ab::LexiconSet lexicons_from(const std::string& path) {
  return path.empty() ? ab::load_lexicons() : ab::load_lexicons(fs::path(path));
}

std::uint64_t resolve_seed(std::uint64_t seed, bool entropy) {
  if (!entropy) return seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

ab::ComponentWeights load_weights(const std::string& path) {
  ab::ComponentWeights weights = ab::ComponentWeights::defaults();
  if (path.empty()) return weights;
  std::ifstream in(path);
  if (!in) throw ab::IngestError("cannot open weights file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ab::IngestError("weights file " + path + ": " + e.what());
  }
  for (const auto& [key, value] : j.items()) {
    const auto label = ab::component_from_name(key);
    if (!label) throw ab::IngestError("weights file: unknown component " + key);
    if (!value.is_number() || value.get<double>() < 0.0)
      throw ab::IngestError("weights file: bad weight for " + key);
    weights[*label] = value.get<double>();
  }
  return weights;
}

// Parser selection shared by `parse` and `eval`. Returning a ParseFn keeps
// the model/config alive inside the closure.
ab::ParseFn make_parser(const std::string& kind, const std::string& model_path,
                        const ab::LexiconSet& lex) {
  if (kind == "rule") {
    auto config = std::make_shared<ab::RuleConfig>(ab::RuleConfig{lex, true});
    return [config](const std::string& text) {
      return ab::parse_rule(text, *config);
    };
  }
  auto model = std::make_shared<ab::TaggerModel>(ab::load_model(model_path));
  auto lex_copy = std::make_shared<ab::LexiconSet>(lex);
  return [model, lex_copy](const std::string& text) {
    return ab::parse_tagger(text, *model, *lex_copy);
  };
}

void echo_config(const std::string& line) { std::cerr << "config: " << line << "\n"; }

int run_split(const std::string& input, const std::string& out_dir,
              std::uint64_t seed) {
  ab::LoadReport report;
  const ab::ReferenceCorpus corpus = ab::load_reference(input, &report);
  if (!report.rejects.empty()) {
    std::cerr << report.rejects.size() << " row(s) rejected:\n";
    for (const auto& [row, reason] : report.rejects) {
      std::cerr << "  row " << row << ": " << reason << "\n";
    }
  }
  const ab::ReferenceCorpus unique = ab::dedupe_streets(corpus);
  const ab::SplitBundle bundle = ab::split(unique, seed);
  fs::create_directories(out_dir);
  ab::write_reference_csv(bundle.train, fs::path(out_dir) / "train.csv");
  ab::write_reference_csv(bundle.validation,
                          fs::path(out_dir) / "validation.csv");
  ab::write_reference_csv(bundle.test, fs::path(out_dir) / "test.csv");
  std::cout << "loaded " << corpus.records.size() << " records ("
            << report.rejects.size() << " rejected), " << unique.records.size()
            << " unique streets\n";
  std::cout << "train " << bundle.train.size() << "\n";
  std::cout << "validation " << bundle.validation.size() << "\n";
  std::cout << "test " << bundle.test.size() << "\n";
  return 0;
}

int run_synth(const std::string& split_dir, const std::string& out_dir,
              const ab::InjectionPolicy& policy, const ab::LexiconSet& lex) {
  ab::SplitBundle bundle;
  bundle.seed = policy.seed;
  bundle.train = ab::load_reference(fs::path(split_dir) / "train.csv").records;
  bundle.validation =
      ab::load_reference(fs::path(split_dir) / "validation.csv").records;
  bundle.test = ab::load_reference(fs::path(split_dir) / "test.csv").records;
  auto [splits, manifest] = ab::synthesize(bundle, policy, lex);
  ab::export_datasets(splits, manifest, out_dir);
  for (const auto& [name, stats] : manifest.splits) {
    std::cout << name << " " << stats.total << " records: "
              << stats.by_error_count[0] << " clean, " << stats.by_error_count[1]
              << " one-error, " << stats.by_error_count[2] << " two-error\n";
  }
  std::cout << "manifest " << (fs::path(out_dir) / "manifest.json").string()
            << "\n";
  return 0;
}

int run_train(const std::string& train_path, const std::string& val_path,
              const std::string& model_out, int epochs, std::uint64_t seed,
              const ab::LexiconSet& lex) {
  const auto train_data = ab::load_conll(train_path);
  const auto val_data = ab::load_conll(val_path);
  ab::TrainConfig config;
  config.epochs = epochs;
  config.shuffle_seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  ab::TaggerModel model = ab::train(
      train_data, config, lex,
      [&](const ab::EpochStats& stats, const ab::TaggerModel& snapshot) {
        std::vector<ab::LabeledSequence> predictions;
        predictions.reserve(val_data.size());
        for (const auto& seq : val_data) {
          predictions.push_back(ab::viterbi(seq.tokens, snapshot, lex));
        }
        const ab::EvalReport report = ab::chunk_prf(val_data, predictions);
        std::fprintf(stderr,
                     "epoch %d/%d updates=%zu train_token_err=%.5f "
                     "val_f1=%.5f\n",
                     stats.epoch, epochs, stats.sequence_updates,
                     stats.token_error_rate(), report.overall.f1());
      });
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
  ab::save_model(model, model_out);
  std::cout << "model written to " << model_out << " (sha256 "
            << ab::sha256_file(model_out) << ", " << elapsed << " ms)\n";
  return 0;
}

int run_parse(const std::string& text, const std::string& file,
              const ab::ParseFn& parser, bool as_json) {
  std::vector<std::string> inputs;
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw ab::IngestError("cannot open input file: " + file);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) inputs.push_back(line);
    }
  } else {
    inputs.push_back(text);
  }
  bool first = true;
  for (const std::string& input : inputs) {
    const ab::LabeledSequence seq = parser(input);
    if (as_json) {
      nlohmann::json tokens = nlohmann::json::array();
      nlohmann::json tags = nlohmann::json::array();
      for (const auto& t : seq.tokens) tokens.push_back(t);
      for (const auto& t : seq.tags) tags.push_back(t.to_string());
      std::cout << nlohmann::json{{"tokens", tokens}, {"tags", tags}}.dump()
                << "\n";
    } else {
      if (!first) std::cout << "\n";
      for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
        std::cout << seq.tokens[i] << "\t" << seq.tags[i].to_string() << "\n";
      }
    }
    first = false;
  }
  return 0;
}

int run_eval(const std::string& test_path, const ab::ParseFn& parser,
             const ab::ComponentWeights& weights, const std::string& out_path,
             bool token_level) {
  const auto gold = ab::load_conll(test_path);
  const ab::EvalReport report = ab::evaluate_parser(parser, gold, weights);
  ab::parsing_score(report, weights, &std::cerr);  // surface absent components
  report.print_table(std::cout, weights);
  const nlohmann::json j = report.to_json(weights, token_level);
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw ab::IoError("cannot write report: " + out_path);
    out << j.dump(2) << "\n";
    std::cerr << "report written to " << out_path << "\n";
  }
  return 0;
}

int run_score_only(const std::string& f1_path,
                   const ab::ComponentWeights& weights) {
  std::ifstream in(f1_path);
  if (!in) throw ab::IngestError("cannot open F1 file: " + f1_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ab::IngestError("F1 file " + f1_path + ": " + e.what());
  }
  double score = 0.0;
  for (const auto& [key, value] : j.items()) {
    const auto label = ab::component_from_name(key);
    if (!label) throw ab::IngestError("F1 file: unknown component " + key);
    score += weights[*label] * value.get<double>();
  }
  std::printf("%.5f\n", score);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"addrbench: benchmark toolkit for US postal-address parsing"};
  app.require_subcommand(1);

  std::uint64_t seed = ab::kDefaultSeed;
  bool entropy = false;
  std::string lexicon_path;
  app.add_option("--seed", seed, "deterministic seed")->capture_default_str();
  app.add_flag("--entropy", entropy, "draw the seed from system entropy");
  app.add_option("--lexicons", lexicon_path, "lexicon override file");

  auto* split_cmd = app.add_subcommand("split", "dedupe and split a reference CSV");
  std::string split_input, split_out;
  split_cmd->add_option("reference", split_input, "reference CSV")->required();
  split_cmd->add_option("out_dir", split_out, "output directory")->required();

  auto* synth_cmd =
      app.add_subcommand("synth", "synthesize labeled low-quality datasets");
  std::string synth_in, synth_out;
  ab::InjectionPolicy policy;
  synth_cmd->add_option("split_dir", synth_in, "directory with split CSVs")
      ->required();
  synth_cmd->add_option("out_dir", synth_out, "output directory")->required();
  synth_cmd->add_option("--p-corrupt", policy.p_corrupt, "corruption probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  synth_cmd
      ->add_option("--p-two", policy.p_two_given_corrupt,
                   "two-error probability given corruption")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  synth_cmd
      ->add_option("--postal-weight", policy.postal_mismatch_weight,
                   "relative weight of the postal digit mismatch")
      ->check(CLI::Range(1e-9, 1.0))
      ->capture_default_str();

  auto* train_cmd = app.add_subcommand("train", "train the sequence tagger");
  std::string train_in, train_val, train_model;
  int epochs = 25;
  train_cmd->add_option("train_conll", train_in)->required();
  train_cmd->add_option("val_conll", train_val)->required();
  train_cmd->add_option("model_out", train_model)->required();
  train_cmd->add_option("--epochs", epochs)->check(CLI::Range(1, 10000))
      ->capture_default_str();

  auto* parse_cmd = app.add_subcommand("parse", "parse address text");
  std::string parse_text, parse_file, parse_parser = "rule", parse_model;
  bool parse_json = false;
  parse_cmd->add_option("text", parse_text, "address text");
  parse_cmd->add_option("--file", parse_file, "file with one address per line");
  parse_cmd->add_option("--parser", parse_parser)
      ->check(CLI::IsMember({"rule", "tagger"}))
      ->capture_default_str();
  parse_cmd->add_option("--model", parse_model, "tagger model file");
  parse_cmd->add_flag("--json", parse_json, "emit JSON lines");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a parser on a test set");
  std::string eval_test, eval_parser = "rule", eval_model, eval_weights;
  std::string eval_out, eval_score_only;
  bool eval_token_level = false;
  eval_cmd->add_option("test_conll", eval_test);
  eval_cmd->add_option("--parser", eval_parser)
      ->check(CLI::IsMember({"rule", "tagger"}))
      ->capture_default_str();
  eval_cmd->add_option("--model", eval_model, "tagger model file");
  eval_cmd->add_option("--weights", eval_weights, "component weights JSON");
  eval_cmd->add_option("--out", eval_out, "write the JSON report here");
  eval_cmd->add_option("--score-only", eval_score_only,
                       "compute the parsing score from a component->F1 JSON");
  eval_cmd->add_flag("--token-level", eval_token_level,
                     "include token-level accuracy in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    seed = resolve_seed(seed, entropy);
    policy.seed = seed;

    if (split_cmd->parsed()) {
      echo_config("command=split input=" + split_input + " out=" + split_out +
                  " seed=" + std::to_string(seed));
      return run_split(split_input, split_out, seed);
    }
    if (synth_cmd->parsed()) {
      echo_config("command=synth input=" + synth_in + " out=" + synth_out +
                  " seed=" + std::to_string(seed) +
                  " p_corrupt=" + std::to_string(policy.p_corrupt) +
                  " p_two=" + std::to_string(policy.p_two_given_corrupt) +
                  " postal_weight=" +
                  std::to_string(policy.postal_mismatch_weight));
      return run_synth(synth_in, synth_out, policy, lexicons_from(lexicon_path));
    }
    if (train_cmd->parsed()) {
      echo_config("command=train train=" + train_in + " val=" + train_val +
                  " model=" + train_model + " epochs=" + std::to_string(epochs) +
                  " seed=" + std::to_string(seed));
      return run_train(train_in, train_val, train_model, epochs, seed,
                       lexicons_from(lexicon_path));
    }
    if (parse_cmd->parsed()) {
      if (parse_text.empty() && parse_file.empty()) {
        std::cerr << "usage error: parse needs address text or --file\n";
        return 1;
      }
      if (parse_parser == "tagger" && parse_model.empty()) {
        std::cerr << "usage error: --parser tagger requires --model\n";
        return 1;
      }
      echo_config("command=parse parser=" + parse_parser +
                  " seed=" + std::to_string(seed));
      return run_parse(parse_text, parse_file,
                       make_parser(parse_parser, parse_model,
                                   lexicons_from(lexicon_path)),
                       parse_json);
    }
    if (eval_cmd->parsed()) {
      const ab::ComponentWeights weights = load_weights(eval_weights);
      if (!eval_score_only.empty()) {
        echo_config("command=eval score_only=" + eval_score_only);
        return run_score_only(eval_score_only, weights);
      }
      if (eval_test.empty()) {
        std::cerr << "usage error: eval needs a test CoNLL file or --score-only\n";
        return 1;
      }
      if (eval_parser == "tagger" && eval_model.empty()) {
        std::cerr << "usage error: --parser tagger requires --model\n";
        return 1;
      }
      echo_config("command=eval test=" + eval_test + " parser=" + eval_parser +
                  " seed=" + std::to_string(seed));
      return run_eval(eval_test,
                      make_parser(eval_parser, eval_model,
                                  lexicons_from(lexicon_path)),
                      weights, eval_out, eval_token_level);
    }
  } catch (const ab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
