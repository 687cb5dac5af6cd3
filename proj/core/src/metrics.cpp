#include "normnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "normnet/errors.hpp"

namespace normnet {

Metrics confusion_metrics(std::span<const int> predictions,
                          std::span<const int> labels) {
  if (predictions.size() != labels.size()) {
    throw LengthMismatchError("confusion_metrics: size mismatch");
  }
  if (predictions.empty()) {
    throw LengthMismatchError("confusion_metrics: empty input");
  }
  Metrics m;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool pred = predictions[i] == 1;
    const bool truth = labels[i] == 1;
    if (pred && truth) ++m.tp;
    else if (pred && !truth) ++m.fp;
    else if (!pred && truth) ++m.fn;
    else ++m.tn;
  }
  auto ratio = [](long num, long den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  m.a = ratio(m.tp + m.tn, m.tp + m.tn + m.fp + m.fn);
  m.tpr = ratio(m.tp, m.tp + m.fn);
  m.ppv = ratio(m.tp, m.tp + m.fp);
  m.tnr = ratio(m.tn, m.tn + m.fp);
  m.npv = ratio(m.tn, m.tn + m.fn);
  if (m.tpr && m.ppv && *m.tpr + *m.ppv > 0.0) {
    m.f1 = 2.0 * *m.tpr * *m.ppv / (*m.tpr + *m.ppv);
  }
  return m;
}

RocCurve roc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw LengthMismatchError("roc: size mismatch");
  }
  long pos = 0, neg = 0;
  for (int label : labels) (label == 1 ? pos : neg)++;
  if (pos == 0 || neg == 0) {
    throw SingleClassLabelsError("roc: both classes must be present");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  RocCurve curve;
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  long tp = 0, fp = 0;
  double area = 0.0;
  double prev_fpr = 0.0, prev_tpr = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    // consume the whole tie group so tied scores form a single ROC point
    while (i < order.size() && scores[order[i]] == threshold) {
      (labels[order[i]] == 1 ? tp : fp)++;
      ++i;
    }
    const double fpr = static_cast<double>(fp) / static_cast<double>(neg);
    const double tpr = static_cast<double>(tp) / static_cast<double>(pos);
    area += 0.5 * (fpr - prev_fpr) * (tpr + prev_tpr);
    curve.points.push_back({threshold, fpr, tpr});
    prev_fpr = fpr;
    prev_tpr = tpr;
  }
  curve.auroc = area;
  return curve;
}

std::vector<ReliabilityBin> reliability(std::span<const double> probabilities,
                                        std::span<const int> labels, int n_bins) {
  if (probabilities.size() != labels.size()) {
    throw LengthMismatchError("reliability: size mismatch");
  }
  if (n_bins < 2) throw InvalidParameterError("reliability: n_bins must be >= 2");
  if (probabilities.size() < static_cast<std::size_t>(n_bins)) {
    throw TooFewPointsError("reliability: fewer points than bins");
  }
  std::vector<std::size_t> order(probabilities.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return probabilities[a] < probabilities[b];
  });

  const std::size_t n = order.size();
  const std::size_t base = n / static_cast<std::size_t>(n_bins);
  const std::size_t rem = n % static_cast<std::size_t>(n_bins);
  std::vector<ReliabilityBin> bins;
  bins.reserve(static_cast<std::size_t>(n_bins));
  std::size_t at = 0;
  for (int b = 0; b < n_bins; ++b) {
    const std::size_t count = base + (static_cast<std::size_t>(b) < rem ? 1 : 0);
    double sum_p = 0.0;
    long sum_y = 0;
    for (std::size_t k = 0; k < count; ++k, ++at) {
      sum_p += probabilities[order[at]];
      sum_y += labels[order[at]];
    }
    bins.push_back({sum_p / static_cast<double>(count),
                    static_cast<double>(sum_y) / static_cast<double>(count),
                    static_cast<int>(count)});
  }
  return bins;
}

double optimal_threshold(const RocCurve& curve) {
  double best_d2 = std::numeric_limits<double>::infinity();
  double best_threshold = 0.5;
  for (const RocPoint& p : curve.points) {
    const double d2 = p.fpr * p.fpr + (1.0 - p.tpr) * (1.0 - p.tpr);
    if (d2 < best_d2 || (d2 == best_d2 && p.threshold > best_threshold)) {
      best_d2 = d2;
      best_threshold = p.threshold;
    }
  }
  return best_threshold;
}

namespace {

std::optional<double> auroc_if_both_classes(std::span<const ScoredRecord> recs,
                                            const std::vector<std::size_t>& idx) {
  bool has_pos = false, has_neg = false;
  for (std::size_t i : idx) {
    (recs[i].label == 1 ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) return std::nullopt;
  std::vector<double> scores;
  std::vector<int> labels;
  scores.reserve(idx.size());
  labels.reserve(idx.size());
  for (std::size_t i : idx) {
    scores.push_back(recs[i].score);
    labels.push_back(recs[i].label);
  }
  return roc(scores, labels).auroc;
}

SizeReportRow make_row(std::string key, std::span<const ScoredRecord> recs,
                       const std::vector<std::size_t>& idx) {
  std::vector<int> preds, labels;
  preds.reserve(idx.size());
  labels.reserve(idx.size());
  for (std::size_t i : idx) {
    preds.push_back(recs[i].prediction);
    labels.push_back(recs[i].label);
  }
  SizeReportRow row;
  row.key = std::move(key);
  row.metrics = confusion_metrics(preds, labels);
  row.auroc = auroc_if_both_classes(recs, idx);
  return row;
}

}  // namespace

std::vector<SizeReportRow> per_size_report(std::span<const ScoredRecord> records) {
  if (records.empty()) throw EmptyDatasetError("per_size_report: empty input");
  std::map<int, std::vector<std::size_t>> by_size;
  std::vector<std::size_t> all(records.size());
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t i = 0; i < records.size(); ++i) {
    by_size[records[i].n].push_back(i);
  }
  std::vector<SizeReportRow> rows;
  rows.reserve(by_size.size() + 1);
  for (const auto& [n, idx] : by_size) {
    rows.push_back(make_row(std::to_string(n), records, idx));
  }
  rows.push_back(make_row("overall", records, all));
  return rows;
}

std::string size_report_csv(const std::vector<SizeReportRow>& rows) {
  std::ostringstream out;
  out << "n,a,tpr,ppv,tnr,npv,f1,auroc\n";
  auto cell = [&](const std::optional<double>& v) {
    if (v) {
      out << *v;
    }
    out << ',';
  };
  for (const auto& r : rows) {
    out << r.key << ',';
    cell(r.metrics.a);
    cell(r.metrics.tpr);
    cell(r.metrics.ppv);
    cell(r.metrics.tnr);
    cell(r.metrics.npv);
    cell(r.metrics.f1);
    if (r.auroc) out << *r.auroc;
    out << '\n';
  }
  return out.str();
}

}  // namespace normnet
