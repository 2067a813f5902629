#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "addrbench/address_model.hpp"
#include "addrbench/error_injector.hpp"
#include "addrbench/lexicons.hpp"

namespace addrbench {

struct ReferenceCorpus {
  std::vector<AddressRecord> records;
  std::string source;
};

struct LoadReport {
  std::size_t accepted = 0;
  std::vector<std::pair<int, std::string>> rejects;  // (row number, reason)
};

// Reads the reference CSV schema:
//   id,house_number,predirectional,street_name,road_type,postdirectional,
//   city,state,zip
// Empty cells become absent components. Rows violating record invariants
// (or duplicating an id) are rejected and reported, not fatal. A missing or
// wrong header, or an unreadable file, throws IngestError.
ReferenceCorpus load_reference(const std::filesystem::path& path,
                               LoadReport* report = nullptr);

// Writes records back out in the same CSV schema (RFC 4180 quoting).
void write_reference_csv(const std::vector<AddressRecord>& records,
                         const std::filesystem::path& path);

// Keeps the first record per case-insensitive street key (every component
// except house number). Output preserves first-occurrence order.
ReferenceCorpus dedupe_streets(const ReferenceCorpus& corpus);

struct SplitBundle {
  std::vector<AddressRecord> train;
  std::vector<AddressRecord> validation;
  std::vector<AddressRecord> test;
  std::uint64_t seed = kDefaultSeed;
};

// Test: one uniformly chosen record per (state, postal code) pair. From the
// remainder, per (city, state, postal code) group: uniformly sample
// min(9, size) records; the first two go to train and, when the sample has
// three or more, the last goes to validation. Everything is seed-driven and
// the three splits are pairwise disjoint.
SplitBundle split(const ReferenceCorpus& unique, std::uint64_t seed);

struct LabeledRecord {
  AddressRecord record;     // post-corruption
  LabeledSequence sequence; // corrupted_labels(record)
};

struct LabeledDataset {
  std::vector<LabeledRecord> records;
};

struct SplitStats {
  std::size_t total = 0;
  std::array<std::size_t, 3> by_error_count = {0, 0, 0};
  std::map<ErrorKind, std::size_t> kind_counts;
};

struct SynthesizedSplits {
  LabeledDataset train;
  LabeledDataset validation;
  LabeledDataset test;
};

struct DatasetManifest {
  InjectionPolicy policy;
  std::map<std::string, SplitStats> splits;       // keyed train/validation/test
  std::map<std::string, std::string> file_hashes; // file name -> sha256 hex

  nlohmann::json to_json() const;
};

// Corrupts every record with an RNG stream derived from (policy.seed,
// record id), so results do not depend on processing order.
LabeledDataset synthesize_split(const std::vector<AddressRecord>& records,
                                const InjectionPolicy& policy,
                                const LexiconSet& lex, SplitStats* stats);

std::pair<SynthesizedSplits, DatasetManifest> synthesize(
    const SplitBundle& bundle, const InjectionPolicy& policy,
    const LexiconSet& lex);

// Writes <split>.conll and <split>.jsonl per split plus manifest.json,
// recording a SHA-256 per data file in the manifest. CoNLL lines are
// `<token>TAB<tag>` with one blank line between sequences and no trailing
// blank line.
void export_datasets(const SynthesizedSplits& splits, DatasetManifest& manifest,
                     const std::filesystem::path& dir);

std::vector<LabeledSequence> load_conll(const std::filesystem::path& path);

void write_conll(const std::vector<const LabeledSequence*>& sequences,
                 const std::filesystem::path& path);

std::string sha256_file(const std::filesystem::path& path);

}  // namespace addrbench
