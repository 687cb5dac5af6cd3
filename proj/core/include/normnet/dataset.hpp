#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "normnet/distributions.hpp"
#include "normnet/rng.hpp"
#include "normnet/sample.hpp"

namespace normnet {

// Where a record came from: family name, its parameters, the four target
// moments for Pearson draws, and the substream index used to draw it.
struct Provenance {
  std::string family;
  std::vector<double> params;
  std::optional<std::array<double, 4>> moments;  // mean, sd, skew, kurt
  std::uint64_t seed_index = 0;
};

struct Record {
  Sample values;
  int label = 0;  // 1 = normal
  Provenance prov;
};

struct DatasetMeta {
  std::string name;
  std::uint64_t master_seed = 0;
  // (label, n) -> count; kept consistent with the records by construction.
  std::map<std::pair<int, int>, int> counts;
};

struct LabeledDataset {
  DatasetMeta meta;
  std::vector<Record> records;

  void recount();  // rebuilds meta.counts from records
};

// Synthesis plan for the moment-grid corpora. Normal-class records draw
// (mu, sigma) uniformly from the stated ranges; non-normal records cycle a
// shuffled list of feasible (skew, kurt) grid pairs, redrawing (mu, sigma)
// on each visit. Output is balanced by label and by sample size.
struct GenSpec {
  std::vector<int> sizes{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  int per_class_total = 2000;
  double mean_lo = -100.0, mean_hi = 100.0;
  double sd_lo = 1.0, sd_hi = 20.0;
  double skew_abs_max = 30.0, skew_step = 0.5;
  double kurt_max = 40.0, kurt_step = 0.5;
  std::uint64_t master_seed = 0;
  std::string name = "dataset";
};

// Feasible, constructible grid pairs for a GenSpec: kurt > skew^2 + 1,
// (skew, kurt) != (0, 3), and the Pearson coefficient denominator nonzero.
std::vector<std::pair<double, double>> feasible_grid_pairs(const GenSpec& spec);

LabeledDataset generate_pearson_style_set(const GenSpec& spec);

// per_size samples per size drawn by cycling over group_distributions(g);
// every label is 0.
LabeledDataset generate_group_set(Group g, const std::vector<int>& sizes,
                                  int per_size, std::uint64_t seed);

// Stratified split by (label, size): both parts stay balanced, are disjoint
// and union to the input.
std::pair<LabeledDataset, LabeledDataset> split_cv_test(const LabeledDataset& data,
                                                        double cv_fraction,
                                                        RandomStream& rng);

// CSV with columns height, age, male (any order, header required). Emits one
// sample per (sex, sliding 10-year age window) with at least 3 members;
// windows run [start, start+10) for start = min_age .. 80.
std::vector<Sample> ingest_height_csv(const std::filesystem::path& path,
                                      int window_years = 10, int min_age = 18);

// Single-column numeric CSV (header required). For each n in sizes, per_size
// subsamples are drawn without replacement within a sample (and with
// replacement across samples); all labels 0.
LabeledDataset ingest_magnitude_csv(const std::filesystem::path& path,
                                    const std::vector<int>& sizes, int per_size,
                                    RandomStream& rng);

// Line-delimited JSON: first line metadata (with format_version), then one
// record per line. Round trips bit-exactly.
void save_dataset(const LabeledDataset& data, const std::filesystem::path& path);
LabeledDataset load_dataset(const std::filesystem::path& path);

// FNV-1a over the canonical serialized bytes; used for determinism checks.
std::uint64_t dataset_hash(const LabeledDataset& data);

}  // namespace normnet
