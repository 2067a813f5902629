#include "addrbench/dataset_pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "addrbench/errors.hpp"

namespace addrbench {

namespace {

constexpr char kKeySep = '\x1f';

const std::array<std::string, 9> kCsvHeader = {
    "id",   "house_number", "predirectional", "street_name", "road_type",
    "postdirectional", "city", "state", "zip"};

// Column order of the component cells (after the id column).
constexpr std::array<ComponentLabel, 8> kCsvColumns = {
    ComponentLabel::HouseNumber,    ComponentLabel::Predirectional,
    ComponentLabel::StreetBaseName, ComponentLabel::RoadType,
    ComponentLabel::Postdirectional, ComponentLabel::City,
    ComponentLabel::State,          ComponentLabel::PostalCode,
};

// RFC 4180 reader. Tracks physical line numbers for error reporting.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  int row_line() const { return row_line_; }

  bool next_row(std::vector<std::string>& fields) {
    fields.clear();
    if (in_.peek() == EOF) return false;
    row_line_ = line_;
    std::string field;
    bool quoted = false;
    bool any = false;
    int c;
    while ((c = in_.get()) != EOF) {
      any = true;
      const char ch = static_cast<char>(c);
      if (quoted) {
        if (ch == '"') {
          if (in_.peek() == '"') {
            field += '"';
            in_.get();
          } else {
            quoted = false;
          }
        } else {
          if (ch == '\n') ++line_;
          field += ch;
        }
      } else if (ch == '"' && field.empty()) {
        quoted = true;
      } else if (ch == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else if (ch == '\n') {
        ++line_;
        break;
      } else if (ch == '\r') {
        // swallow; newline follows in CRLF files
      } else {
        field += ch;
      }
    }
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
  }

 private:
  std::istream& in_;
  int line_ = 1;
  int row_line_ = 1;
};

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string street_key(const AddressRecord& r) {
  std::string key;
  for (ComponentLabel label : kAllComponents) {
    if (label == ComponentLabel::HouseNumber) continue;
    key += to_lower(r.component(label).value_or(""));
    key += kKeySep;
  }
  return key;
}

std::string state_zip_key(const AddressRecord& r) {
  return to_lower(r.component(ComponentLabel::State).value_or("")) + kKeySep +
         to_lower(r.component(ComponentLabel::PostalCode).value_or(""));
}

std::string city_state_zip_key(const AddressRecord& r) {
  return to_lower(r.component(ComponentLabel::City).value_or("")) + kKeySep +
         state_zip_key(r);
}

std::string hex_digest(const unsigned char* digest, unsigned len) {
  static const char* kHex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

nlohmann::json record_to_json(const LabeledRecord& lr) {
  nlohmann::json components = nlohmann::json::object();
  for (ComponentLabel label : kAllComponents) {
    const auto& value = lr.record.component(label);
    if (value) components[std::string(component_name(label))] = *value;
  }
  nlohmann::json tokens = nlohmann::json::array();
  nlohmann::json tags = nlohmann::json::array();
  for (const auto& t : lr.sequence.tokens) tokens.push_back(t);
  for (const auto& t : lr.sequence.tags) tags.push_back(t.to_string());
  nlohmann::json outcomes = nlohmann::json::array();
  for (const auto& o : lr.record.injected_outcomes) {
    outcomes.push_back({{"kind", std::string(error_kind_name(o.kind))},
                        {"component", std::string(component_name(o.component))},
                        {"before", o.before},
                        {"after", o.after}});
  }
  return {{"id", lr.record.id},
          {"components", components},
          {"tokens", tokens},
          {"tags", tags},
          {"outcomes", outcomes}};
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << body;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

ReferenceCorpus load_reference(const std::filesystem::path& path,
                               LoadReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open reference file: " + path.string());

  CsvReader reader(in);
  std::vector<std::string> fields;
  if (!reader.next_row(fields)) throw IngestError("empty file: " + path.string());
  if (!fields.empty() && fields[0].size() >= 3 &&
      static_cast<unsigned char>(fields[0][0]) == 0xEF) {
    fields[0].erase(0, 3);  // UTF-8 BOM
  }
  if (fields.size() != kCsvHeader.size() ||
      !std::equal(fields.begin(), fields.end(), kCsvHeader.begin())) {
    throw IngestError("unexpected header in " + path.string());
  }

  ReferenceCorpus corpus;
  corpus.source = path.string();
  LoadReport local;
  LoadReport& rep = report ? *report : local;
  std::set<std::string> seen_ids;
  while (reader.next_row(fields)) {
    const int row = reader.row_line();
    if (fields.size() != kCsvHeader.size()) {
      rep.rejects.emplace_back(row, "wrong field count");
      continue;
    }
    AddressRecord record;
    record.id = fields[0];
    for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
      if (!fields[i + 1].empty()) record.component(kCsvColumns[i]) = fields[i + 1];
    }
    if (record.id.empty()) {
      rep.rejects.emplace_back(row, "empty id");
      continue;
    }
    if (!seen_ids.insert(record.id).second) {
      rep.rejects.emplace_back(row, "duplicate id " + record.id);
      continue;
    }
    if (auto violation = record_violation(record, /*require_street=*/true)) {
      rep.rejects.emplace_back(row, *violation);
      continue;
    }
    corpus.records.push_back(std::move(record));
    ++rep.accepted;
  }
  return corpus;
}

void write_reference_csv(const std::vector<AddressRecord>& records,
                         const std::filesystem::path& path) {
  std::ostringstream out;
  for (std::size_t i = 0; i < kCsvHeader.size(); ++i) {
    if (i) out << ',';
    out << kCsvHeader[i];
  }
  out << '\n';
  for (const auto& r : records) {
    out << csv_quote(r.id);
    for (ComponentLabel label : kCsvColumns) {
      out << ',' << csv_quote(r.component(label).value_or(""));
    }
    out << '\n';
  }
  write_file(path, out.str());
}

ReferenceCorpus dedupe_streets(const ReferenceCorpus& corpus) {
  ReferenceCorpus out;
  out.source = corpus.source;
  std::set<std::string> seen;
  for (const auto& r : corpus.records) {
    if (seen.insert(street_key(r)).second) out.records.push_back(r);
  }
  return out;
}

SplitBundle split(const ReferenceCorpus& unique, std::uint64_t seed) {
  SplitBundle bundle;
  bundle.seed = seed;

  // One record per (state, zip) pair goes to test.
  std::map<std::string, std::vector<std::size_t>> by_state_zip;
  for (std::size_t i = 0; i < unique.records.size(); ++i) {
    by_state_zip[state_zip_key(unique.records[i])].push_back(i);
  }
  std::vector<bool> in_test(unique.records.size(), false);
  RandomSource test_rng(seed, "split/test");
  for (const auto& [key, indices] : by_state_zip) {
    const std::size_t pick = indices[test_rng.uniform_index(indices.size())];
    in_test[pick] = true;
    bundle.test.push_back(unique.records[pick]);
  }

  // Group the remainder by (city, state, zip); sample up to nine per group,
  // first two to train, last (when the sample has >= 3) to validation.
  std::map<std::string, std::vector<std::size_t>> by_city;
  for (std::size_t i = 0; i < unique.records.size(); ++i) {
    if (in_test[i]) continue;
    by_city[city_state_zip_key(unique.records[i])].push_back(i);
  }
  RandomSource group_rng(seed, "split/trainval");
  for (const auto& [key, indices] : by_city) {
    std::vector<std::size_t> sample = indices;
    group_rng.shuffle(sample);
    const std::size_t k = std::min<std::size_t>(9, sample.size());
    sample.resize(k);
    if (k >= 1) bundle.train.push_back(unique.records[sample[0]]);
    if (k >= 2) bundle.train.push_back(unique.records[sample[1]]);
    if (k >= 3) bundle.validation.push_back(unique.records[sample[k - 1]]);
  }
  return bundle;
}

LabeledDataset synthesize_split(const std::vector<AddressRecord>& records,
                                const InjectionPolicy& policy,
                                const LexiconSet& lex, SplitStats* stats) {
  LabeledDataset out;
  out.records.reserve(records.size());
  for (const auto& record : records) {
    RandomSource rng(policy.seed, record.id);
    AddressRecord corrupted = corrupt(record, policy, lex, rng);
    LabeledSequence seq = corrupted_labels(corrupted);
    if (stats) {
      ++stats->total;
      const std::size_t n = corrupted.injected_outcomes.size();
      ++stats->by_error_count[std::min<std::size_t>(n, 2)];
      for (const auto& o : corrupted.injected_outcomes) {
        ++stats->kind_counts[o.kind];
      }
    }
    out.records.push_back({std::move(corrupted), std::move(seq)});
  }
  return out;
}

std::pair<SynthesizedSplits, DatasetManifest> synthesize(
    const SplitBundle& bundle, const InjectionPolicy& policy,
    const LexiconSet& lex) {
  SynthesizedSplits splits;
  DatasetManifest manifest;
  manifest.policy = policy;
  splits.train = synthesize_split(bundle.train, policy, lex,
                                  &manifest.splits["train"]);
  splits.validation = synthesize_split(bundle.validation, policy, lex,
                                       &manifest.splits["validation"]);
  splits.test =
      synthesize_split(bundle.test, policy, lex, &manifest.splits["test"]);
  return {std::move(splits), std::move(manifest)};
}

nlohmann::json DatasetManifest::to_json() const {
  nlohmann::json j;
  j["format"] = "addrbench-manifest";
  j["version"] = 1;
  j["policy"] = {{"p_corrupt", policy.p_corrupt},
                 {"p_two_given_corrupt", policy.p_two_given_corrupt},
                 {"postal_mismatch_weight", policy.postal_mismatch_weight},
                 {"seed", policy.seed}};
  nlohmann::json split_json = nlohmann::json::object();
  for (const auto& [name, stats] : splits) {
    nlohmann::json kinds = nlohmann::json::object();
    for (std::size_t i = 0; i < kErrorKindCount; ++i) {
      const auto kind = static_cast<ErrorKind>(i);
      const auto it = stats.kind_counts.find(kind);
      kinds[std::string(error_kind_name(kind))] =
          it == stats.kind_counts.end() ? 0 : it->second;
    }
    split_json[name] = {
        {"records", stats.total},
        {"by_error_count",
         {{"0", stats.by_error_count[0]},
          {"1", stats.by_error_count[1]},
          {"2", stats.by_error_count[2]}}},
        {"error_kinds", kinds}};
  }
  j["splits"] = split_json;
  j["files"] = file_hashes;
  return j;
}

void write_conll(const std::vector<const LabeledSequence*>& sequences,
                 const std::filesystem::path& path) {
  std::ostringstream out;
  bool first = true;
  for (const LabeledSequence* seq : sequences) {
    if (!first) out << '\n';
    first = false;
    for (std::size_t i = 0; i < seq->tokens.size(); ++i) {
      out << seq->tokens[i] << '\t' << seq->tags[i].to_string() << '\n';
    }
  }
  write_file(path, out.str());
}

std::vector<LabeledSequence> load_conll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open conll file: " + path.string());
  std::vector<LabeledSequence> sequences;
  LabeledSequence current;
  auto flush = [&] {
    if (!current.tokens.empty()) {
      sequences.push_back(std::move(current));
      current = {};
    }
  };
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
      throw IngestError(path.string() + ":" + std::to_string(line_no) +
                        ": expected <token>TAB<tag>");
    }
    const auto tag = IOBTag::parse(line.substr(tab + 1));
    if (!tag) {
      throw IngestError(path.string() + ":" + std::to_string(line_no) +
                        ": unknown tag '" + line.substr(tab + 1) + "'");
    }
    current.tokens.push_back(line.substr(0, tab));
    current.tags.push_back(*tag);
  }
  flush();
  return sequences;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for hashing: " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    if (!in) break;
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  return hex_digest(digest, len);
}

void export_datasets(const SynthesizedSplits& splits, DatasetManifest& manifest,
                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::array<std::pair<const char*, const LabeledDataset*>, 3> parts = {{
      {"train", &splits.train},
      {"validation", &splits.validation},
      {"test", &splits.test},
  }};
  for (const auto& [name, ds] : parts) {
    std::vector<const LabeledSequence*> seqs;
    seqs.reserve(ds->records.size());
    for (const auto& lr : ds->records) seqs.push_back(&lr.sequence);
    const auto conll_path = dir / (std::string(name) + ".conll");
    write_conll(seqs, conll_path);

    std::ostringstream jsonl;
    for (const auto& lr : ds->records) {
      jsonl << record_to_json(lr).dump() << '\n';
    }
    const auto jsonl_path = dir / (std::string(name) + ".jsonl");
    write_file(jsonl_path, jsonl.str());

    manifest.file_hashes[std::string(name) + ".conll"] = sha256_file(conll_path);
    manifest.file_hashes[std::string(name) + ".jsonl"] = sha256_file(jsonl_path);
  }
  write_file(dir / "manifest.json", manifest.to_json().dump(2) + "\n");
}

}  // namespace addrbench
