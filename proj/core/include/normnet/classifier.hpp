#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "normnet/dataset.hpp"
#include "normnet/features.hpp"
#include "normnet/mlp.hpp"

namespace normnet {

// Input representation fed to the network: the quantile descriptor (DBNN)
// or the seven-statistic vector (SBNN).
enum class FeatureMode { Descriptor, StatVector };

std::string feature_mode_name(FeatureMode mode);
FeatureMode feature_mode_from_name(const std::string& name);

// Feature vector for one sample. Descriptor mode uses granularity q;
// statistic mode requires n >= 11.
std::vector<double> features_for(std::span<const double> sample, FeatureMode mode,
                                 double q);

// Samples as columns; labels written to *labels when non-null.
Eigen::MatrixXd feature_matrix(const LabeledDataset& data, FeatureMode mode,
                               double q, std::vector<int>* labels);

// Copy of the dataset keeping only records the representation can express
// (the statistic vector needs n >= 11 and tie-free spacing windows).
// skipped, when non-null, receives the number of dropped records.
LabeledDataset filter_featurizable(const LabeledDataset& data, FeatureMode mode,
                                   double q, std::size_t* skipped = nullptr);

// Featurize + train in one step.
std::pair<Network, TrainReport> train_classifier(const LabeledDataset& data,
                                                 const NetworkConfig& cfg,
                                                 FeatureMode mode);

// --- cross-validated grid search --------------------------------------------

struct GridSpec {
  std::vector<double> qs{0.05, 0.1};
  std::vector<std::vector<int>> architectures{{100, 10}, {1000}};
  std::vector<double> cs{0.1, 1.0, 10.0};
};

struct CvCell {
  double q = 0.1;
  std::vector<int> architecture;
  double c = 0.1;
  double acc_mean = 0.0;
  double acc_sd = 0.0;
  double time_mean = 0.0;
  double time_sd = 0.0;
};

struct GridSearchResult {
  std::vector<CvCell> cells;   // grid order: q, then architecture, then c
  std::size_t best_index = 0;
  NetworkConfig best_config;
};

// k-fold cross-validation over every grid cell. Folds are stratified by
// label and shared across cells; descriptors are recomputed per q. Each
// (cell, fold) fit gets an independently derived seed, and cells may be
// trained concurrently without changing any result. Best cell = highest
// mean accuracy, ties broken by smaller architecture then larger c.
GridSearchResult grid_search_cv(const LabeledDataset& data, const GridSpec& grid,
                                int folds, const NetworkConfig& base,
                                FeatureMode mode, RandomStream& rng,
                                int workers = 0);

std::string grid_report_csv(const GridSearchResult& result);

// --- learning curves ---------------------------------------------------------

struct LearningCurveRow {
  double fraction = 1.0;
  double median_train_acc = 0.0;
  double median_test_acc = 0.0;
  double median_fit_time = 0.0;
  std::vector<double> fit_times;
};

// Per fraction: k-fold train/test accuracies and wall times on a stratified
// random subset of the stated fraction, medians reported.
std::vector<LearningCurveRow> learning_curve(const LabeledDataset& data,
                                             const std::vector<double>& fractions,
                                             int folds, const NetworkConfig& cfg,
                                             FeatureMode mode, RandomStream& rng,
                                             int workers = 0);

// --- model files -------------------------------------------------------------

struct LoadedModel {
  Network net;
  FeatureMode mode = FeatureMode::Descriptor;
};

// JSON model file: config, input dim, normalizer statistics, row-major layer
// weights, biases, threshold and a format_version.
void save_model(const Network& net, FeatureMode mode,
                const std::filesystem::path& path);
LoadedModel load_model(const std::filesystem::path& path);

}  // namespace normnet
