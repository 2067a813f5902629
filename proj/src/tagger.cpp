#include "addrbench/tagger.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <limits>

#include "addrbench/errors.hpp"

namespace addrbench {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

constexpr char kModelMagic[8] = {'A', 'B', 'T', 'A', 'G', 'M', 'D', 'L'};
constexpr std::uint32_t kModelVersion = 1;

using WeightRow = TaggerModel::WeightRow;
using TransitionMatrix = TaggerModel::TransitionMatrix;

// Shared DP over precomputed per-position emission scores. Ties break
// toward the lower tag index.
std::vector<std::size_t> viterbi_core(
    const std::vector<WeightRow>& emissions, const TransitionMatrix& trans) {
  const std::size_t n = emissions.size();
  std::vector<WeightRow> dp(n);
  std::vector<std::array<std::size_t, kTagCount>> back(n);
  for (std::size_t t = 0; t < kTagCount; ++t) {
    dp[0][t] = start_allowed(t) ? emissions[0][t] : kNegInf;
  }
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t t = 0; t < kTagCount; ++t) {
      double best = kNegInf;
      std::size_t best_prev = 0;
      for (std::size_t p = 0; p < kTagCount; ++p) {
        if (dp[i - 1][p] == kNegInf || !transition_allowed(p, t)) continue;
        const double score = dp[i - 1][p] + trans[p][t];
        if (score > best) {
          best = score;
          best_prev = p;
        }
      }
      dp[i][t] = best == kNegInf ? kNegInf : best + emissions[i][t];
      back[i][t] = best_prev;
    }
  }
  std::size_t tail = 0;
  double best = kNegInf;
  for (std::size_t t = 0; t < kTagCount; ++t) {
    if (dp[n - 1][t] > best) {
      best = dp[n - 1][t];
      tail = t;
    }
  }
  std::vector<std::size_t> path(n);
  path[n - 1] = tail;
  for (std::size_t i = n - 1; i > 0; --i) {
    path[i - 1] = back[i][path[i]];
  }
  return path;
}

void add_row(WeightRow& acc, const WeightRow& row) {
  for (std::size_t t = 0; t < kTagCount; ++t) acc[t] += row[t];
}

bool all_zero(const WeightRow& row) {
  return std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; });
}

// --- binary model container -------------------------------------------------

void put_bytes(std::ostream& out, const void* data, std::size_t size) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  put_bytes(out, b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  put_bytes(out, b, 8);
}

void put_f64(std::ostream& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

void put_string(std::ostream& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  put_bytes(out, s.data(), s.size());
}

void get_bytes(std::istream& in, void* data, std::size_t size) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
  if (static_cast<std::size_t>(in.gcount()) != size)
    throw ModelLoadError("model file truncated");
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  get_bytes(in, b, 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  get_bytes(in, b, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  return std::bit_cast<double>(get_u64(in));
}

std::string get_string(std::istream& in, std::size_t limit = 1 << 20) {
  const std::uint32_t len = get_u32(in);
  if (len > limit) throw ModelLoadError("model file corrupt: oversized string");
  std::string s(len, '\0');
  get_bytes(in, s.data(), len);
  return s;
}

}  // namespace

IOBTag tag_at(std::size_t index) {
  if (index == 0) return IOBTag::o();
  const std::size_t rem = index - 1;
  const auto label = static_cast<ComponentLabel>(rem / 2);
  return rem % 2 == 0 ? IOBTag::b(label) : IOBTag::i(label);
}

std::size_t tag_index(const IOBTag& tag) {
  if (tag.is_outside()) return 0;
  const std::size_t base = 1 + 2 * static_cast<std::size_t>(tag.label);
  return tag.prefix == IOBTag::Prefix::B ? base : base + 1;
}

bool transition_allowed(std::size_t from, std::size_t to) {
  const IOBTag t = tag_at(to);
  if (t.prefix != IOBTag::Prefix::I) return true;
  const IOBTag f = tag_at(from);
  return !f.is_outside() && f.label == t.label;
}

bool start_allowed(std::size_t to) {
  return tag_at(to).prefix != IOBTag::Prefix::I;
}

FeatureVector extract_features(std::span<const std::string> tokens,
                               std::size_t i, const LexiconSet& lex) {
  const std::string& token = tokens[i];
  const std::string lower = to_lower(token);
  FeatureVector f;
  f.reserve(18);
  f.push_back("w=" + lower);

  std::string shape;
  shape.reserve(token.size());
  bool any_digit = false, every_digit = !token.empty();
  for (unsigned char c : token) {
    if (std::isdigit(c)) {
      shape += 'd';
      any_digit = true;
    } else {
      every_digit = false;
      if (std::isupper(c))
        shape += 'X';
      else if (std::islower(c))
        shape += 'x';
      else
        shape += static_cast<char>(c);
    }
  }
  f.push_back("shape=" + shape);
  if (every_digit) f.push_back("alldigits=1");
  if (any_digit) f.push_back("hasdigit=1");
  if (lex.is_number_with_ordinal_suffix(token)) f.push_back("ordsuffix=1");
  if (lex.is_directional(token)) f.push_back("lex=dir");
  if (lex.is_road_type(token)) f.push_back("lex=road");
  if (lex.is_state_code(token)) f.push_back("lex=state");
  if (lex.is_spanish_prefix(token)) f.push_back("lex=spanish");
  if (lower.size() >= 2) {
    f.push_back("pre2=" + lower.substr(0, 2));
    f.push_back("suf2=" + lower.substr(lower.size() - 2));
  }
  if (lower.size() >= 3) {
    f.push_back("pre3=" + lower.substr(0, 3));
    f.push_back("suf3=" + lower.substr(lower.size() - 3));
  }
  f.push_back(i == 0 ? "prev=<s>" : "prev=" + to_lower(tokens[i - 1]));
  f.push_back(i + 1 == tokens.size() ? "next=</s>"
                                     : "next=" + to_lower(tokens[i + 1]));
  if (i == 0) f.push_back("first=1");
  if (i + 1 == tokens.size()) f.push_back("last=1");
  return f;
}

TaggerModel::TaggerModel() {
  for (auto& row : raw_transitions_) row.fill(0.0);
  for (auto& row : avg_transitions_) row.fill(0.0);
}

const TaggerModel::WeightRow* TaggerModel::decode_row(
    const std::string& feature) const {
  const auto it = avg_emissions_.find(feature);
  return it == avg_emissions_.end() ? nullptr : &it->second;
}

double TaggerModel::emission(const std::string& feature,
                             std::size_t tag) const {
  const WeightRow* row = decode_row(feature);
  return row ? (*row)[tag] : 0.0;
}

void TaggerModel::set_weights(std::unordered_map<std::string, WeightRow> raw,
                              std::unordered_map<std::string, WeightRow> averaged,
                              const TransitionMatrix& raw_trans,
                              const TransitionMatrix& avg_trans) {
  raw_emissions_ = std::move(raw);
  avg_emissions_ = std::move(averaged);
  raw_transitions_ = raw_trans;
  avg_transitions_ = avg_trans;
}

LabeledSequence viterbi(std::span<const std::string> tokens,
                        const TaggerModel& model, const LexiconSet& lex) {
  if (tokens.empty()) throw EmptyInputError();
  std::vector<WeightRow> emissions(tokens.size());
  for (auto& row : emissions) row.fill(0.0);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (const std::string& feature : extract_features(tokens, i, lex)) {
      if (const WeightRow* row = model.decode_row(feature)) {
        add_row(emissions[i], *row);
      }
    }
  }
  const auto path = viterbi_core(emissions, model.decode_transitions());
  LabeledSequence seq;
  seq.tokens.assign(tokens.begin(), tokens.end());
  seq.tags.reserve(path.size());
  for (std::size_t t : path) seq.tags.push_back(tag_at(t));
  return seq;
}

TaggerModel train(const std::vector<LabeledSequence>& dataset,
                  const TrainConfig& config, const LexiconSet& lex,
                  const TrainProgress& progress) {
  if (dataset.empty()) throw TrainDataError("training dataset is empty");
  if (config.epochs < 1) throw TrainDataError("epochs must be >= 1");

  struct CachedSequence {
    std::vector<std::vector<std::uint32_t>> features;  // per position
    std::vector<std::size_t> gold;                     // tag indices
  };

  std::unordered_map<std::string, std::uint32_t> feature_ids;
  std::vector<std::string> feature_names;
  auto intern = [&](const std::string& f) {
    const auto [it, inserted] =
        feature_ids.emplace(f, static_cast<std::uint32_t>(feature_names.size()));
    if (inserted) feature_names.push_back(f);
    return it->second;
  };

  std::vector<CachedSequence> cache;
  cache.reserve(dataset.size());
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    const LabeledSequence& seq = dataset[s];
    if (seq.tokens.empty() || seq.tokens.size() != seq.tags.size())
      throw TrainDataError("sequence #" + std::to_string(s) +
                           ": empty or token/tag length mismatch");
    if (!validate_iob(seq))
      throw TrainDataError("sequence #" + std::to_string(s) +
                           ": gold tags violate IOB validity");
    CachedSequence cs;
    cs.features.resize(seq.tokens.size());
    cs.gold.resize(seq.tokens.size());
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
      for (const std::string& f : extract_features(seq.tokens, i, lex)) {
        cs.features[i].push_back(intern(f));
      }
      cs.gold[i] = tag_index(seq.tags[i]);
    }
    cache.push_back(std::move(cs));
  }

  std::vector<WeightRow> w(feature_names.size());
  std::vector<WeightRow> acc(feature_names.size());
  for (auto& row : w) row.fill(0.0);
  for (auto& row : acc) row.fill(0.0);
  TransitionMatrix wt{}, acct{};
  for (auto& row : wt) row.fill(0.0);
  for (auto& row : acct) row.fill(0.0);
  std::uint64_t updates = 0;

  // Averaged weights = mean of the post-update snapshots: with A holding
  // sum_j j*delta_j over updates 1..K, the mean is ((K+1)*w - A) / K.
  auto materialize = [&]() {
    TaggerModel model;
    std::unordered_map<std::string, WeightRow> raw_map, avg_map;
    TransitionMatrix avg_t{};
    const double k = static_cast<double>(updates);
    auto averaged = [&](double wv, double av) {
      return updates == 0 || !config.averaging ? wv : ((k + 1) * wv - av) / k;
    };
    for (std::size_t f = 0; f < feature_names.size(); ++f) {
      WeightRow avg_row;
      for (std::size_t t = 0; t < kTagCount; ++t)
        avg_row[t] = averaged(w[f][t], acc[f][t]);
      if (all_zero(w[f]) && all_zero(avg_row)) continue;
      raw_map.emplace(feature_names[f], w[f]);
      avg_map.emplace(feature_names[f], avg_row);
    }
    for (std::size_t a = 0; a < kTagCount; ++a)
      for (std::size_t b = 0; b < kTagCount; ++b)
        avg_t[a][b] = averaged(wt[a][b], acct[a][b]);
    model.set_weights(std::move(raw_map), std::move(avg_map), wt, avg_t);
    return model;
  };

  std::vector<std::size_t> order(cache.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    RandomSource rng(config.shuffle_seed, "train/epoch/" + std::to_string(epoch));
    rng.shuffle(order);
    EpochStats stats;
    stats.epoch = epoch;
    for (std::size_t idx : order) {
      const CachedSequence& cs = cache[idx];
      const std::size_t n = cs.gold.size();
      std::vector<WeightRow> emissions(n);
      for (std::size_t i = 0; i < n; ++i) {
        emissions[i].fill(0.0);
        for (std::uint32_t f : cs.features[i]) add_row(emissions[i], w[f]);
      }
      const auto path = viterbi_core(emissions, wt);
      std::size_t errors = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (path[i] != cs.gold[i]) ++errors;
      }
      stats.tokens += n;
      stats.token_errors += errors;
      if (errors == 0) continue;
      ++updates;
      ++stats.sequence_updates;
      const double j = static_cast<double>(updates);
      for (std::size_t i = 0; i < n; ++i) {
        if (path[i] == cs.gold[i]) continue;
        for (std::uint32_t f : cs.features[i]) {
          w[f][cs.gold[i]] += 1.0;
          acc[f][cs.gold[i]] += j;
          w[f][path[i]] -= 1.0;
          acc[f][path[i]] -= j;
        }
      }
      for (std::size_t i = 1; i < n; ++i) {
        if (cs.gold[i - 1] == path[i - 1] && cs.gold[i] == path[i]) continue;
        wt[cs.gold[i - 1]][cs.gold[i]] += 1.0;
        acct[cs.gold[i - 1]][cs.gold[i]] += j;
        wt[path[i - 1]][path[i]] -= 1.0;
        acct[path[i - 1]][path[i]] -= j;
      }
    }
    if (progress) progress(stats, materialize());
  }
  return materialize();
}

LabeledSequence parse_tagger(std::string_view text, const TaggerModel& model,
                             const LexiconSet& lex) {
  const auto tokens = tokenize(text);
  if (tokens.empty()) throw EmptyInputError();
  return viterbi(tokens, model, lex);
}

void save_model(const TaggerModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open model file for writing: " + path.string());
  put_bytes(out, kModelMagic, sizeof(kModelMagic));
  put_u32(out, kModelVersion);
  put_u32(out, static_cast<std::uint32_t>(kTagCount));
  for (std::size_t t = 0; t < kTagCount; ++t) {
    put_string(out, tag_at(t).to_string());
  }
  for (std::size_t a = 0; a < kTagCount; ++a) {
    for (std::size_t b = 0; b < kTagCount; ++b) {
      out.put(transition_allowed(a, b) ? 1 : 0);
    }
  }
  for (std::size_t a = 0; a < kTagCount; ++a)
    for (std::size_t b = 0; b < kTagCount; ++b)
      put_f64(out, model.raw_transitions()[a][b]);
  for (std::size_t a = 0; a < kTagCount; ++a)
    for (std::size_t b = 0; b < kTagCount; ++b)
      put_f64(out, model.decode_transitions()[a][b]);

  std::vector<std::string> keys;
  keys.reserve(model.raw_emissions().size());
  for (const auto& [key, row] : model.raw_emissions()) keys.push_back(key);
  for (const auto& [key, row] : model.averaged_emissions()) {
    if (!model.raw_emissions().count(key)) keys.push_back(key);
  }
  std::sort(keys.begin(), keys.end());
  put_u64(out, keys.size());
  const TaggerModel::WeightRow zeros{};
  for (const std::string& key : keys) {
    put_string(out, key);
    const auto raw_it = model.raw_emissions().find(key);
    const auto avg_it = model.averaged_emissions().find(key);
    const auto& raw_row =
        raw_it == model.raw_emissions().end() ? zeros : raw_it->second;
    const auto& avg_row =
        avg_it == model.averaged_emissions().end() ? zeros : avg_it->second;
    for (double v : raw_row) put_f64(out, v);
    for (double v : avg_row) put_f64(out, v);
  }
  if (!out) throw IoError("model write failed: " + path.string());
}

TaggerModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelLoadError("cannot open model file: " + path.string());
  char magic[sizeof(kModelMagic)];
  get_bytes(in, magic, sizeof(magic));
  if (std::memcmp(magic, kModelMagic, sizeof(magic)) != 0)
    throw ModelLoadError("not an addrbench model file: " + path.string());
  const std::uint32_t version = get_u32(in);
  if (version != kModelVersion)
    throw ModelLoadError("unsupported model version " + std::to_string(version));
  const std::uint32_t tag_count = get_u32(in);
  if (tag_count != kTagCount)
    throw ModelLoadError("model tag inventory size mismatch");
  for (std::size_t t = 0; t < kTagCount; ++t) {
    if (get_string(in) != tag_at(t).to_string())
      throw ModelLoadError("model tag inventory mismatch");
  }
  for (std::size_t a = 0; a < kTagCount; ++a) {
    for (std::size_t b = 0; b < kTagCount; ++b) {
      char byte;
      get_bytes(in, &byte, 1);
      if ((byte != 0) != transition_allowed(a, b))
        throw ModelLoadError("model transition mask mismatch");
    }
  }
  TransitionMatrix raw_t{}, avg_t{};
  for (std::size_t a = 0; a < kTagCount; ++a)
    for (std::size_t b = 0; b < kTagCount; ++b) raw_t[a][b] = get_f64(in);
  for (std::size_t a = 0; a < kTagCount; ++a)
    for (std::size_t b = 0; b < kTagCount; ++b) avg_t[a][b] = get_f64(in);
  const std::uint64_t feature_count = get_u64(in);
  std::unordered_map<std::string, WeightRow> raw_map, avg_map;
  raw_map.reserve(feature_count);
  avg_map.reserve(feature_count);
  for (std::uint64_t i = 0; i < feature_count; ++i) {
    std::string key = get_string(in);
    WeightRow raw_row, avg_row;
    for (double& v : raw_row) v = get_f64(in);
    for (double& v : avg_row) v = get_f64(in);
    raw_map.emplace(key, raw_row);
    avg_map.emplace(std::move(key), avg_row);
  }
  TaggerModel model;
  model.set_weights(std::move(raw_map), std::move(avg_map), raw_t, avg_t);
  return model;
}

}  // namespace addrbench
