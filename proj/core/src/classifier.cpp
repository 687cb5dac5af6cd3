#include "normnet/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "normnet/errors.hpp"
#include "normnet/parallel.hpp"

namespace normnet {

namespace {

using nlohmann::json;

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

void shuffle_in_place(std::vector<std::size_t>& v, RandomStream rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.next_u64() % i);
    std::swap(v[i - 1], v[j]);
  }
}

// Stratified fold assignment, folds balanced by class.
std::vector<int> fold_assignment(std::span<const int> labels, int folds,
                                 RandomStream rng) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] == 1 ? pos : neg).push_back(i);
  }
  shuffle_in_place(pos, rng.substream(0));
  shuffle_in_place(neg, rng.substream(1));
  std::vector<int> fold(labels.size(), 0);
  int next = 0;
  for (std::size_t i : pos) fold[i] = next++ % folds;
  for (std::size_t i : neg) fold[i] = next++ % folds;
  return fold;
}

}  // namespace

std::string feature_mode_name(FeatureMode mode) {
  return mode == FeatureMode::Descriptor ? "dbnn" : "sbnn";
}

FeatureMode feature_mode_from_name(const std::string& name) {
  if (name == "dbnn") return FeatureMode::Descriptor;
  if (name == "sbnn") return FeatureMode::StatVector;
  throw InvalidParameterError("unknown feature mode: " + name);
}

std::vector<double> features_for(std::span<const double> sample, FeatureMode mode,
                                 double q) {
  if (mode == FeatureMode::Descriptor) {
    return descriptor(sample, q).flatten();
  }
  const auto v = sbnn_features(sample).flatten();
  return std::vector<double>(v.begin(), v.end());
}

Eigen::MatrixXd feature_matrix(const LabeledDataset& data, FeatureMode mode,
                               double q, std::vector<int>* labels) {
  if (data.records.empty()) throw EmptyDatasetError("feature_matrix: empty dataset");
  const std::vector<double> first = features_for(data.records[0].values, mode, q);
  Eigen::MatrixXd X(static_cast<Eigen::Index>(first.size()),
                    static_cast<Eigen::Index>(data.records.size()));
  if (labels) labels->assign(data.records.size(), 0);
  parallel_for(data.records.size(), [&](std::size_t i) {
    const std::vector<double> f =
        i == 0 ? first : features_for(data.records[i].values, mode, q);
    if (f.size() != static_cast<std::size_t>(X.rows())) {
      throw DimensionMismatchError("feature_matrix: inconsistent feature size");
    }
    for (std::size_t r = 0; r < f.size(); ++r) {
      X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = f[r];
    }
  });
  if (labels) {
    for (std::size_t i = 0; i < data.records.size(); ++i) {
      (*labels)[i] = data.records[i].label;
    }
  }
  return X;
}

LabeledDataset filter_featurizable(const LabeledDataset& data, FeatureMode mode,
                                   double q, std::size_t* skipped) {
  LabeledDataset usable;
  usable.meta = data.meta;
  std::size_t dropped = 0;
  for (const auto& rec : data.records) {
    try {
      (void)features_for(rec.values, mode, q);
      usable.records.push_back(rec);
    } catch (const Error&) {
      ++dropped;
    }
  }
  usable.recount();
  if (skipped) *skipped = dropped;
  return usable;
}

std::pair<Network, TrainReport> train_classifier(const LabeledDataset& data,
                                                 const NetworkConfig& cfg,
                                                 FeatureMode mode) {
  std::vector<int> labels;
  const Eigen::MatrixXd X = feature_matrix(data, mode, cfg.q, &labels);
  return train(cfg, X, labels);
}

GridSearchResult grid_search_cv(const LabeledDataset& data, const GridSpec& grid,
                                int folds, const NetworkConfig& base,
                                FeatureMode mode, RandomStream& rng, int workers) {
  if (folds < 2) throw InvalidParameterError("grid_search_cv: folds must be >= 2");
  if (grid.qs.empty() || grid.architectures.empty() || grid.cs.empty()) {
    throw InvalidParameterError("grid_search_cv: empty grid");
  }

  // Feature matrices per q, shared across cells.
  std::vector<Eigen::MatrixXd> per_q;
  std::vector<int> labels;
  per_q.reserve(grid.qs.size());
  for (double q : grid.qs) {
    per_q.push_back(feature_matrix(data, mode, q, per_q.empty() ? &labels : nullptr));
  }
  const std::vector<int> fold_of = fold_assignment(labels, folds, rng.substream(0));

  struct Task {
    std::size_t cell;
    std::size_t q_index;
    int fold;
    NetworkConfig cfg;
  };
  std::vector<CvCell> cells;
  std::vector<Task> tasks;
  std::size_t cell_idx = 0;
  for (std::size_t qi = 0; qi < grid.qs.size(); ++qi) {
    for (const auto& arch : grid.architectures) {
      for (double c : grid.cs) {
        CvCell cell;
        cell.q = grid.qs[qi];
        cell.architecture = arch;
        cell.c = c;
        cells.push_back(cell);
        for (int f = 0; f < folds; ++f) {
          NetworkConfig cfg = base;
          cfg.q = grid.qs[qi];
          cfg.hidden_layers = arch;
          cfg.reg_c = c;
          cfg.seed = rng.substream(1 + cell_idx * static_cast<std::size_t>(folds) +
                                   static_cast<std::size_t>(f))
                         .key();
          tasks.push_back({cell_idx, qi, f, std::move(cfg)});
        }
        ++cell_idx;
      }
    }
  }

  std::vector<double> task_acc(tasks.size(), 0.0);
  std::vector<double> task_time(tasks.size(), 0.0);
  parallel_for(
      tasks.size(),
      [&](std::size_t t) {
        const Task& task = tasks[t];
        const Eigen::MatrixXd& X = per_q[task.q_index];
        std::vector<Eigen::Index> train_cols, test_cols;
        for (std::size_t i = 0; i < fold_of.size(); ++i) {
          (fold_of[i] == task.fold ? test_cols : train_cols)
              .push_back(static_cast<Eigen::Index>(i));
        }
        Eigen::MatrixXd Xt(X.rows(), static_cast<Eigen::Index>(train_cols.size()));
        std::vector<int> yt(train_cols.size());
        for (std::size_t k = 0; k < train_cols.size(); ++k) {
          Xt.col(static_cast<Eigen::Index>(k)) = X.col(train_cols[k]);
          yt[k] = labels[static_cast<std::size_t>(train_cols[k])];
        }
        auto [net, report] = train(task.cfg, Xt, yt);
        Eigen::MatrixXd Xe(X.rows(), static_cast<Eigen::Index>(test_cols.size()));
        for (std::size_t k = 0; k < test_cols.size(); ++k) {
          Xe.col(static_cast<Eigen::Index>(k)) = X.col(test_cols[k]);
        }
        const Eigen::VectorXd p1 = forward_batch(net, Xe);
        long correct = 0;
        for (Eigen::Index k = 0; k < p1.size(); ++k) {
          const int pred = classify(net, p1(k));
          if (pred == labels[static_cast<std::size_t>(test_cols[static_cast<std::size_t>(k)])]) {
            ++correct;
          }
        }
        task_acc[t] = static_cast<double>(correct) / static_cast<double>(test_cols.size());
        task_time[t] = report.wall_time_seconds;
      },
      workers);

  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<double> accs, times;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      if (tasks[t].cell == c) {
        accs.push_back(task_acc[t]);
        times.push_back(task_time[t]);
      }
    }
    cells[c].acc_mean = mean_of(accs);
    cells[c].acc_sd = sd_of(accs);
    cells[c].time_mean = mean_of(times);
    cells[c].time_sd = sd_of(times);
  }

  auto arch_size = [](const std::vector<int>& a) {
    return std::accumulate(a.begin(), a.end(), 0);
  };
  std::size_t best = 0;
  for (std::size_t c = 1; c < cells.size(); ++c) {
    const CvCell& cand = cells[c];
    const CvCell& cur = cells[best];
    if (cand.acc_mean > cur.acc_mean) {
      best = c;
    } else if (cand.acc_mean == cur.acc_mean) {
      if (arch_size(cand.architecture) < arch_size(cur.architecture) ||
          (arch_size(cand.architecture) == arch_size(cur.architecture) &&
           cand.c > cur.c)) {
        best = c;
      }
    }
  }

  GridSearchResult result;
  result.cells = std::move(cells);
  result.best_index = best;
  result.best_config = base;
  result.best_config.q = result.cells[best].q;
  result.best_config.hidden_layers = result.cells[best].architecture;
  result.best_config.reg_c = result.cells[best].c;
  return result;
}

std::string grid_report_csv(const GridSearchResult& result) {
  std::ostringstream out;
  out << "q,architecture,c,accuracy_mean,accuracy_sd,time_mean_s,time_sd_s,best\n";
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const CvCell& c = result.cells[i];
    out << c.q << ',';
    for (std::size_t k = 0; k < c.architecture.size(); ++k) {
      if (k) out << ' ';
      out << c.architecture[k];
    }
    out << ',' << c.c << ',' << c.acc_mean << ',' << c.acc_sd << ','
        << c.time_mean << ',' << c.time_sd << ','
        << (i == result.best_index ? 1 : 0) << '\n';
  }
  return out.str();
}

std::vector<LearningCurveRow> learning_curve(const LabeledDataset& data,
                                             const std::vector<double>& fractions,
                                             int folds, const NetworkConfig& cfg,
                                             FeatureMode mode, RandomStream& rng,
                                             int workers) {
  if (folds < 2) throw InvalidParameterError("learning_curve: folds must be >= 2");
  for (double f : fractions) {
    if (!(f > 0.0 && f <= 1.0)) {
      throw InvalidParameterError("learning_curve: fractions must lie in (0,1]");
    }
  }
  std::vector<int> labels;
  const Eigen::MatrixXd X = feature_matrix(data, mode, cfg.q, &labels);

  std::vector<LearningCurveRow> rows(fractions.size());
  for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
    // Stratified subset of the requested fraction.
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      (labels[i] == 1 ? pos : neg).push_back(i);
    }
    RandomStream frac_rng = rng.substream(100 + fi);
    shuffle_in_place(pos, frac_rng.substream(0));
    shuffle_in_place(neg, frac_rng.substream(1));
    const double f = fractions[fi];
    pos.resize(static_cast<std::size_t>(std::lround(f * static_cast<double>(pos.size()))));
    neg.resize(static_cast<std::size_t>(std::lround(f * static_cast<double>(neg.size()))));
    std::vector<std::size_t> subset = pos;
    subset.insert(subset.end(), neg.begin(), neg.end());
    std::sort(subset.begin(), subset.end());

    std::vector<int> sub_labels(subset.size());
    for (std::size_t k = 0; k < subset.size(); ++k) sub_labels[k] = labels[subset[k]];
    const std::vector<int> fold_of =
        fold_assignment(sub_labels, folds, frac_rng.substream(2));

    std::vector<double> train_accs(static_cast<std::size_t>(folds), 0.0);
    std::vector<double> test_accs(static_cast<std::size_t>(folds), 0.0);
    std::vector<double> times(static_cast<std::size_t>(folds), 0.0);
    parallel_for(
        static_cast<std::size_t>(folds),
        [&](std::size_t fold) {
          std::vector<Eigen::Index> train_cols, test_cols;
          for (std::size_t i = 0; i < subset.size(); ++i) {
            (fold_of[i] == static_cast<int>(fold) ? test_cols : train_cols)
                .push_back(static_cast<Eigen::Index>(subset[i]));
          }
          NetworkConfig run_cfg = cfg;
          run_cfg.seed = frac_rng.substream(10 + fold).key();
          Eigen::MatrixXd Xt(X.rows(), static_cast<Eigen::Index>(train_cols.size()));
          std::vector<int> yt(train_cols.size());
          for (std::size_t k = 0; k < train_cols.size(); ++k) {
            Xt.col(static_cast<Eigen::Index>(k)) = X.col(train_cols[k]);
            yt[k] = labels[static_cast<std::size_t>(train_cols[k])];
          }
          auto [net, report] = train(run_cfg, Xt, yt);
          auto accuracy_on = [&](const std::vector<Eigen::Index>& cols) {
            Eigen::MatrixXd Xe(X.rows(), static_cast<Eigen::Index>(cols.size()));
            for (std::size_t k = 0; k < cols.size(); ++k) {
              Xe.col(static_cast<Eigen::Index>(k)) = X.col(cols[k]);
            }
            const Eigen::VectorXd p1 = forward_batch(net, Xe);
            long correct = 0;
            for (Eigen::Index k = 0; k < p1.size(); ++k) {
              if (classify(net, p1(k)) ==
                  labels[static_cast<std::size_t>(cols[static_cast<std::size_t>(k)])]) {
                ++correct;
              }
            }
            return static_cast<double>(correct) / static_cast<double>(cols.size());
          };
          train_accs[fold] = accuracy_on(train_cols);
          test_accs[fold] = accuracy_on(test_cols);
          times[fold] = report.wall_time_seconds;
        },
        workers);

    rows[fi].fraction = f;
    rows[fi].median_train_acc = median_of(train_accs);
    rows[fi].median_test_acc = median_of(test_accs);
    rows[fi].median_fit_time = median_of(times);
    rows[fi].fit_times = times;
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Model files
// ---------------------------------------------------------------------------

namespace {
constexpr int kModelFormatVersion = 1;
}

void save_model(const Network& net, FeatureMode mode,
                const std::filesystem::path& path) {
  json j;
  j["format_version"] = kModelFormatVersion;
  j["mode"] = feature_mode_name(mode);
  json cfg;
  cfg["hidden_layers"] = net.config.hidden_layers;
  cfg["q"] = net.config.q;
  cfg["reg_c"] = net.config.reg_c;
  cfg["max_epochs"] = net.config.max_epochs;
  cfg["adam"] = {{"step", net.config.adam.step},
                 {"beta1", net.config.adam.beta1},
                 {"beta2", net.config.adam.beta2},
                 {"eps", net.config.adam.eps}};
  cfg["early_stop"] = {{"validation_fraction", net.config.early_stop.validation_fraction},
                       {"patience", net.config.early_stop.patience}};
  cfg["batch_size"] = net.config.batch_size;
  cfg["seed"] = net.config.seed;
  j["config"] = cfg;
  j["input_dim"] = net.input_dim;
  j["normalizer"] = {
      {"mean", std::vector<double>(net.norm_mean.data(),
                                   net.norm_mean.data() + net.norm_mean.size())},
      {"sd", std::vector<double>(net.norm_sd.data(),
                                 net.norm_sd.data() + net.norm_sd.size())}};
  json layers = json::array();
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    const auto& w = net.weights[l];
    std::vector<double> row_major;
    row_major.reserve(static_cast<std::size_t>(w.size()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) row_major.push_back(w(r, c));
    }
    layers.push_back({{"rows", w.rows()},
                      {"cols", w.cols()},
                      {"weights", row_major},
                      {"bias", std::vector<double>(net.biases[l].data(),
                                                   net.biases[l].data() +
                                                       net.biases[l].size())}});
  }
  j["layers"] = layers;
  j["threshold"] = net.threshold;

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(1) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

LoadedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("malformed model file: " + std::string(e.what()));
  }
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw FormatVersionMismatchError("model format_version " +
                                       std::to_string(version) + ", expected " +
                                       std::to_string(kModelFormatVersion));
    }
    LoadedModel loaded;
    loaded.mode = feature_mode_from_name(j.at("mode").get<std::string>());
    Network& net = loaded.net;
    const json& cfg = j.at("config");
    net.config.hidden_layers = cfg.at("hidden_layers").get<std::vector<int>>();
    net.config.q = cfg.at("q").get<double>();
    net.config.reg_c = cfg.at("reg_c").get<double>();
    net.config.max_epochs = cfg.at("max_epochs").get<int>();
    net.config.adam.step = cfg.at("adam").at("step").get<double>();
    net.config.adam.beta1 = cfg.at("adam").at("beta1").get<double>();
    net.config.adam.beta2 = cfg.at("adam").at("beta2").get<double>();
    net.config.adam.eps = cfg.at("adam").at("eps").get<double>();
    net.config.early_stop.validation_fraction =
        cfg.at("early_stop").at("validation_fraction").get<double>();
    net.config.early_stop.patience = cfg.at("early_stop").at("patience").get<int>();
    net.config.batch_size = cfg.at("batch_size").get<int>();
    net.config.seed = cfg.at("seed").get<std::uint64_t>();
    net.input_dim = j.at("input_dim").get<int>();
    const auto mean = j.at("normalizer").at("mean").get<std::vector<double>>();
    const auto sd = j.at("normalizer").at("sd").get<std::vector<double>>();
    net.norm_mean = Eigen::Map<const Eigen::VectorXd>(mean.data(),
                                                      static_cast<Eigen::Index>(mean.size()));
    net.norm_sd = Eigen::Map<const Eigen::VectorXd>(sd.data(),
                                                    static_cast<Eigen::Index>(sd.size()));
    for (const auto& layer : j.at("layers")) {
      const auto rows = layer.at("rows").get<Eigen::Index>();
      const auto cols = layer.at("cols").get<Eigen::Index>();
      const auto weights = layer.at("weights").get<std::vector<double>>();
      const auto bias = layer.at("bias").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(weights.size()) != rows * cols ||
          static_cast<Eigen::Index>(bias.size()) != rows) {
        throw IoError("model layer shape mismatch");
      }
      Eigen::MatrixXd w(rows, cols);
      std::size_t at = 0;
      for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = weights[at++];
      }
      net.weights.push_back(std::move(w));
      net.biases.push_back(Eigen::Map<const Eigen::VectorXd>(bias.data(), rows));
    }
    net.threshold = j.at("threshold").get<double>();
    // Shape chain check: input dim through hidden layers to 2 outputs.
    Eigen::Index expect = net.input_dim;
    for (const auto& w : net.weights) {
      if (w.cols() != expect) throw IoError("model layer chain mismatch");
      expect = w.rows();
    }
    if (expect != 2) throw IoError("model must end in a 2-unit layer");
    return loaded;
  } catch (const json::exception& e) {
    throw IoError("malformed model file: " + std::string(e.what()));
  }
}

}  // namespace normnet
