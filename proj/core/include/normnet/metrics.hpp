#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace normnet {

// Confusion-matrix summary with label 1 = normal. Fields whose denominator
// is zero are absent rather than NaN.
struct Metrics {
  std::optional<double> a, tpr, ppv, tnr, npv, f1;
  long tp = 0, fp = 0, tn = 0, fn = 0;
};

Metrics confusion_metrics(std::span<const int> predictions,
                          std::span<const int> labels);

struct RocPoint {
  double threshold;
  double fpr;
  double tpr;
};

// Threshold sweep over the distinct scores (descending); points run from
// (0,0) to (1,1) and AUROC is the trapezoidal area. Higher score means
// "more normal"; for a statistical test use the p-value (equivalently,
// 1 - p as a non-normality score with the classes swapped - the areas are
// identical).
struct RocCurve {
  std::vector<RocPoint> points;
  double auroc = 0.0;
};

RocCurve roc(std::span<const double> scores, std::span<const int> labels);

struct ReliabilityBin {
  double mean_predicted;
  double empirical_rate;
  int count;
};

// Equal-count bins over the sorted predicted probabilities (counts differ by
// at most one); perfect calibration puts every bin on the diagonal.
std::vector<ReliabilityBin> reliability(std::span<const double> probabilities,
                                        std::span<const int> labels, int n_bins);

// Threshold of the ROC point closest (Euclidean) to the ideal corner (0,1);
// ties break toward the higher threshold.
double optimal_threshold(const RocCurve& curve);

// One evaluated record for the per-size tables.
struct ScoredRecord {
  int n = 0;
  double score = 0.0;  // p1 for a classifier, p-value for a test
  int prediction = 0;
  int label = 0;
};

struct SizeReportRow {
  std::string key;  // sample size as text, or "overall"
  Metrics metrics;
  std::optional<double> auroc;  // absent when only one class is present
};

// Metrics per sample size plus a pooled "overall" row (recomputed from raw
// counts, not averaged over rows).
std::vector<SizeReportRow> per_size_report(std::span<const ScoredRecord> records);

// CSV emission for the report (header + one row per size + overall).
std::string size_report_csv(const std::vector<SizeReportRow>& rows);

}  // namespace normnet
