// Command-line front end: dataset synthesis, training, testing and
// evaluation wired into reproducible pipelines. Every subcommand derives all
// randomness from --seed and writes a manifest next to its outputs.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "normnet/classifier.hpp"
#include "normnet/dataset.hpp"
#include "normnet/errors.hpp"
#include "normnet/fssd.hpp"
#include "normnet/metrics.hpp"
#include "normnet/parallel.hpp"
#include "normnet/stat_tests.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace normnet;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

std::uint64_t fnv1a_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot hash " + path.string());
  std::uint64_t h = 14695981039346656037ull;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  return h;
}

// Accumulates one run's manifest; written next to the primary output.
class Manifest {
 public:
  Manifest(std::string subcommand, std::uint64_t seed)
      : start_(std::chrono::steady_clock::now()) {
    j_["subcommand"] = std::move(subcommand);
    j_["master_seed"] = seed;
    j_["config"] = json::object();
  }

  json& config() { return j_["config"]; }

  void add_input(const fs::path& p) {
    j_["inputs"].push_back({{"path", p.string()}, {"fnv64", fnv1a_file(p)}});
  }
  void add_output(const fs::path& p) { outputs_.push_back(p); }

  void write(const fs::path& next_to) {
    j_["outputs"] = json::array();
    for (const auto& p : outputs_) {
      j_["outputs"].push_back({{"path", p.string()}, {"fnv64", fnv1a_file(p)}});
    }
    j_["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    fs::path path = next_to;
    path += ".manifest.json";
    std::ofstream out(path, std::ios::trunc);
    out << j_.dump(1) << '\n';
  }

 private:
  json j_;
  std::vector<fs::path> outputs_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<int> parse_arch(const std::string& text) {
  std::vector<int> arch;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) arch.push_back(std::stoi(tok));
  }
  if (arch.empty()) throw CLI::ValidationError("--arch", "empty architecture");
  return arch;
}

std::vector<int> default_sizes_for_set(const std::string& set) {
  if (set == "B") return {5, 15, 25, 35, 45, 55, 65, 75, 85, 95};
  if (set == "large") return {250, 500, 1000};
  return {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};  // A, C, D
}

struct TestRunners {
  double alpha = 0.05;
  int fssd_sims = 200;
  std::uint64_t seed = 0;
  LillieforsEdf lf_edf = LillieforsEdf::Classical;
  LillieforsNullCache* lf_cache = nullptr;

  json run_all(const Sample& x, std::uint64_t sample_index) const {
    json tests = json::object();
    auto put = [&](const char* name, auto&& fn) {
      try {
        const TestOutcome o = fn();
        tests[name] = json::parse(o.to_json());
      } catch (const Error& e) {
        tests[name] = {{"error", e.what()}};
      }
    };
    put("sw", [&] { return shapiro_wilk(x, alpha); });
    put("lf", [&] {
      return lf_cache ? lilliefors(x, *lf_cache, alpha, lf_edf)
                      : lilliefors(x, alpha, lf_edf);
    });
    put("ad", [&] { return anderson_darling(x, alpha); });
    put("jb", [&] { return jarque_bera(x, false, alpha); });
    put("fssd", [&] {
      FssdConfig cfg;
      cfg.null_sims = fssd_sims;
      RandomStream rng = RandomStream(seed).substream(sample_index);
      return fssd_test(x, cfg, alpha, rng);
    });
    return tests;
  }
};

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string set = "A";
  int per_class = 2000;
  int per_size = 500;
  std::vector<int> sizes;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  Manifest manifest("generate", a.seed);
  manifest.config() = {{"set", a.set},   {"per_class", a.per_class},
                       {"per_size", a.per_size}, {"sizes", a.sizes},
                       {"seed", a.seed}, {"out", a.out}};
  const std::vector<int> sizes = a.sizes.empty() ? default_sizes_for_set(a.set) : a.sizes;
  const fs::path out(a.out);

  if (a.set == "C") {
    // One file per group, suffixed before the extension.
    for (Group g : {Group::G1, Group::G2, Group::G3, Group::G4}) {
      LabeledDataset d = generate_group_set(g, sizes, a.per_size,
                                            a.seed + static_cast<std::uint64_t>(g));
      fs::path path = out;
      path.replace_filename(out.stem().string() + "_" + group_name(g) +
                            out.extension().string());
      save_dataset(d, path);
      manifest.add_output(path);
      std::cout << "wrote " << path.string() << " (" << d.records.size()
                << " records)\n";
    }
  } else {
    GenSpec spec;
    spec.sizes = sizes;
    spec.per_class_total = a.per_class;
    spec.master_seed = a.seed;
    spec.name = a.set;
    LabeledDataset d = generate_pearson_style_set(spec);
    save_dataset(d, out);
    manifest.add_output(out);
    std::cout << "wrote " << out.string() << " (" << d.records.size()
              << " records, hash " << dataset_hash(d) << ")\n";
  }
  manifest.write(out);
  return 0;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string data;
  std::string out;
  std::string mode = "dbnn";
  double q = 0.1;
  std::string arch = "100,10";
  double c = 0.1;
  int epochs = 200;
  int batch = 128;
  int patience = 10;
  double step = 1e-3;
  std::uint64_t seed = 0;
};

int cmd_train(const TrainArgs& a) {
  Manifest manifest("train", a.seed);
  manifest.config() = {{"data", a.data}, {"mode", a.mode},   {"q", a.q},
                       {"arch", a.arch}, {"c", a.c},         {"epochs", a.epochs},
                       {"batch", a.batch}, {"patience", a.patience},
                       {"step", a.step}, {"seed", a.seed},   {"out", a.out}};
  manifest.add_input(a.data);

  LabeledDataset data = load_dataset(a.data);
  NetworkConfig cfg;
  cfg.q = a.q;
  cfg.hidden_layers = parse_arch(a.arch);
  cfg.reg_c = a.c;
  cfg.max_epochs = a.epochs;
  cfg.batch_size = a.batch;
  cfg.early_stop.patience = a.patience;
  cfg.adam.step = a.step;
  cfg.seed = a.seed;
  const FeatureMode mode = feature_mode_from_name(a.mode);

  if (mode == FeatureMode::StatVector) {
    // Statistic features need n >= 11 and non-degenerate spacings; drop the
    // records the representation cannot express.
    std::size_t skipped = 0;
    data = filter_featurizable(data, mode, cfg.q, &skipped);
    if (skipped > 0) {
      std::cerr << "note: skipped " << skipped
                << " records unusable for sbnn features\n";
    }
  }

  auto [net, report] = train_classifier(data, cfg, mode);
  save_model(net, mode, a.out);
  manifest.add_output(a.out);

  fs::path report_path(a.out);
  report_path += ".report.json";
  json rj;
  rj["epochs_run"] = report.epochs_run;
  rj["train_loss_history"] = report.train_loss;
  rj["val_loss_history"] = report.val_loss;
  rj["wall_time_seconds"] = report.wall_time_seconds;
  std::ofstream(report_path) << rj.dump(1) << '\n';
  manifest.add_output(report_path);
  manifest.write(a.out);
  std::cout << "trained " << a.mode << " in " << report.wall_time_seconds
            << " s (" << report.epochs_run << " epochs), model: " << a.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// test
// ---------------------------------------------------------------------------

struct TestArgs {
  std::string model;
  std::string input;
  std::string inline_sample;
  std::string out;
  std::string features_csv;
  std::string lf_edf = "classical";
  double alpha = 0.05;
  int fssd_sims = 200;
  std::uint64_t seed = 0;
};

int cmd_test(const TestArgs& a) {
  const LoadedModel model = load_model(a.model);
  std::vector<Sample> samples;
  if (!a.inline_sample.empty()) {
    Sample s;
    std::stringstream ss(a.inline_sample);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) s.push_back(std::stod(tok));
    }
    samples.push_back(std::move(s));
  } else {
    std::ifstream in(a.input);
    if (!in) throw IoError("cannot open " + a.input);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line == "\r") continue;
      Sample s;
      std::stringstream ss(line);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) s.push_back(std::stod(tok));
      }
      if (!s.empty()) samples.push_back(std::move(s));
    }
  }

  const LillieforsEdf edf = a.lf_edf == "classical"
                                ? LillieforsEdf::Classical
                                : LillieforsEdf::AtSamplePoints;
  LillieforsNullCache lf_cache({}, 10000, 0x4c46u, edf);
  TestRunners runners;
  runners.alpha = a.alpha;
  runners.fssd_sims = a.fssd_sims;
  runners.seed = a.seed;
  runners.lf_edf = edf;
  runners.lf_cache = &lf_cache;

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out, std::ios::trunc);
    if (!file) throw IoError("cannot write " + a.out);
    os = &file;
  }

  std::ofstream features;
  if (!a.features_csv.empty()) {
    features.open(a.features_csv, std::ios::trunc);
    if (!features) throw IoError("cannot write " + a.features_csv);
    if (model.mode == FeatureMode::Descriptor) {
      const int m = static_cast<int>(std::ceil(1.0 / model.net.config.q - 1e-9));
      for (int j = 1; j <= m; ++j) features << "q" << j << ",";
      features << "n,mean,sd,min,max,median\n";
    } else {
      features << "skew,kurt,w,zp,k3,k5,n\n";
    }
  }

  // Per-sample errors are reported inline; the batch always completes.
  for (std::size_t i = 0; i < samples.size(); ++i) {
    json line;
    line["index"] = i;
    line["n"] = samples[i].size();
    try {
      const std::vector<double> f =
          features_for(samples[i], model.mode, model.net.config.q);
      const double p1 = forward(model.net, f);
      line["p1"] = p1;
      line["label"] = classify(model.net, p1);
      if (features.is_open()) {
        for (std::size_t k = 0; k < f.size(); ++k) {
          if (k) features << ',';
          features << f[k];
        }
        features << '\n';
      }
    } catch (const Error& e) {
      line["error"] = e.what();
    }
    line["tests"] = runners.run_all(samples[i], i);
    (*os) << line.dump() << '\n';
  }
  if (!a.out.empty()) {
    Manifest manifest("test", a.seed);
    manifest.config() = {{"model", a.model},   {"input", a.input},
                         {"alpha", a.alpha},   {"fssd_sims", a.fssd_sims},
                         {"seed", a.seed},     {"out", a.out}};
    manifest.add_input(a.model);
    if (!a.input.empty()) manifest.add_input(a.input);
    manifest.add_output(a.out);
    manifest.write(a.out);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string model;
  std::string data;
  std::string out_dir = ".";
  std::vector<double> alphas{0.1};
  std::vector<std::string> tests{"sw", "lf", "ad", "jb", "fssd"};
  bool roc_dump = false;
  bool reliability_diagram = false;
  int bins = 10;
  int reliability_subsets = 0;
  int reliability_subset_size = 1000;
  bool optimize_threshold = false;
  int fssd_sims = 200;
  int lf_sims = 10000;
  std::uint64_t seed = 0;
};

json roc_to_json(const RocCurve& curve) {
  json j;
  std::vector<double> thr, fpr, tpr;
  thr.reserve(curve.points.size());
  for (const auto& p : curve.points) {
    thr.push_back(p.threshold);
    fpr.push_back(p.fpr);
    tpr.push_back(p.tpr);
  }
  j["thresholds"] = thr;
  j["fpr"] = fpr;
  j["tpr"] = tpr;
  j["auroc"] = curve.auroc;
  return j;
}

int cmd_evaluate(const EvaluateArgs& a) {
  Manifest manifest("evaluate", a.seed);
  manifest.config() = {{"model", a.model},
                       {"data", a.data},
                       {"out_dir", a.out_dir},
                       {"alphas", a.alphas},
                       {"tests", a.tests},
                       {"roc", a.roc_dump},
                       {"reliability", a.reliability_diagram},
                       {"bins", a.bins},
                       {"reliability_subsets", a.reliability_subsets},
                       {"reliability_subset_size", a.reliability_subset_size},
                       {"optimize_threshold", a.optimize_threshold},
                       {"fssd_sims", a.fssd_sims},
                       {"lf_sims", a.lf_sims},
                       {"seed", a.seed}};
  manifest.add_input(a.model);
  manifest.add_input(a.data);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);

  const LoadedModel model = load_model(a.model);
  const LabeledDataset data = load_dataset(a.data);
  const std::size_t n_records = data.records.size();

  std::vector<int> labels(n_records);
  std::vector<int> sizes(n_records);
  for (std::size_t i = 0; i < n_records; ++i) {
    labels[i] = data.records[i].label;
    sizes[i] = static_cast<int>(data.records[i].values.size());
  }
  const bool both_classes =
      std::count(labels.begin(), labels.end(), 1) > 0 &&
      std::count(labels.begin(), labels.end(), 0) > 0;

  auto write_text = [&](const fs::path& name, const std::string& text) {
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    manifest.add_output(path);
  };

  // Network predictions. Records whose features are not computable in this
  // model's representation (e.g. n < 11 for sbnn) are excluded and counted.
  {
    std::vector<double> p1_all(n_records,
                               std::numeric_limits<double>::quiet_NaN());
    parallel_for(n_records, [&](std::size_t i) {
      try {
        const std::vector<double> f =
            features_for(data.records[i].values, model.mode, model.net.config.q);
        p1_all[i] = forward(model.net, f);
      } catch (const Error&) {
        // left NaN
      }
    });
    std::vector<double> p1;
    std::vector<int> lab;
    std::vector<int> sz;
    std::vector<ScoredRecord> scored;
    for (std::size_t i = 0; i < n_records; ++i) {
      if (std::isnan(p1_all[i])) continue;
      p1.push_back(p1_all[i]);
      lab.push_back(labels[i]);
      sz.push_back(sizes[i]);
      scored.push_back(
          {sizes[i], p1_all[i], classify(model.net, p1_all[i]), labels[i]});
    }
    if (scored.size() < n_records) {
      std::cerr << "note: " << (n_records - scored.size())
                << " records not representable by this model were skipped\n";
    }
    const bool net_both =
        std::count(lab.begin(), lab.end(), 1) > 0 &&
        std::count(lab.begin(), lab.end(), 0) > 0;
    write_text("network_by_size.csv", size_report_csv(per_size_report(scored)));

    if (a.roc_dump && net_both) {
      write_text("roc_network.json", roc_to_json(roc(p1, lab)).dump(1) + "\n");
    }
    if (a.reliability_diagram) {
      std::ostringstream out;
      out << "bin,mean_predicted,empirical_rate,count\n";
      const auto bins = reliability(p1, lab, a.bins);
      for (std::size_t b = 0; b < bins.size(); ++b) {
        out << b << ',' << bins[b].mean_predicted << ',' << bins[b].empirical_rate
            << ',' << bins[b].count << '\n';
      }
      write_text("reliability.csv", out.str());
    }
    if (a.reliability_subsets > 0) {
      // Random equal-size subsets, one diagram per subset.
      std::ostringstream out;
      out << "subset,bin,mean_predicted,empirical_rate,count\n";
      RandomStream rng = RandomStream(a.seed).substream(0xD1A6);
      for (int s = 0; s < a.reliability_subsets; ++s) {
        RandomStream sub_rng = rng.substream(static_cast<std::uint64_t>(s));
        std::vector<std::size_t> idx(p1.size());
        std::iota(idx.begin(), idx.end(), 0);
        for (std::size_t i = idx.size(); i > 1; --i) {
          const auto j = static_cast<std::size_t>(sub_rng.next_u64() % i);
          std::swap(idx[i - 1], idx[j]);
        }
        const auto take = std::min<std::size_t>(
            static_cast<std::size_t>(a.reliability_subset_size), idx.size());
        std::vector<double> sp(take);
        std::vector<int> sl(take);
        for (std::size_t k = 0; k < take; ++k) {
          sp[k] = p1[idx[k]];
          sl[k] = lab[idx[k]];
        }
        const auto bins = reliability(sp, sl, a.bins);
        for (std::size_t b = 0; b < bins.size(); ++b) {
          out << s << ',' << b << ',' << bins[b].mean_predicted << ','
              << bins[b].empirical_rate << ',' << bins[b].count << '\n';
        }
      }
      write_text("reliability_subsets.csv", out.str());
    }
    if (a.optimize_threshold && net_both) {
      std::ostringstream out;
      out << "n,auroc,default_tpr,default_tnr,threshold,optimized_tpr,optimized_tnr\n";
      std::map<int, std::vector<std::size_t>> by_size;
      for (std::size_t i = 0; i < p1.size(); ++i) by_size[sz[i]].push_back(i);
      for (const auto& [n, idx] : by_size) {
        std::vector<double> scores;
        std::vector<int> grp_lab;
        for (std::size_t i : idx) {
          scores.push_back(p1[i]);
          grp_lab.push_back(lab[i]);
        }
        const RocCurve curve = roc(scores, grp_lab);
        const double thr = optimal_threshold(curve);
        auto rates = [&](double threshold) {
          long tp = 0, fn = 0, tn = 0, fp = 0;
          for (std::size_t k = 0; k < scores.size(); ++k) {
            const int pred = scores[k] >= threshold ? 1 : 0;
            if (grp_lab[k] == 1) (pred == 1 ? tp : fn)++;
            else (pred == 0 ? tn : fp)++;
          }
          const double tpr = tp + fn ? static_cast<double>(tp) / (tp + fn) : 0.0;
          const double tnr = tn + fp ? static_cast<double>(tn) / (tn + fp) : 0.0;
          return std::pair<double, double>{tpr, tnr};
        };
        const auto [dtpr, dtnr] = rates(model.net.threshold);
        const auto [otpr, otnr] = rates(thr);
        out << n << ',' << curve.auroc << ',' << dtpr << ',' << dtnr << ','
            << thr << ',' << otpr << ',' << otnr << '\n';
      }
      write_text("thresholds.csv", out.str());
    }
  }

  // Statistical tests.
  LillieforsNullCache lf_cache({}, a.lf_sims);
  for (const std::string& name : a.tests) {
    // p-values are computed once per test; decisions and tables per alpha.
    std::vector<double> pvals(n_records);
    parallel_for(n_records, [&](std::size_t i) {
      const Sample& x = data.records[i].values;
      try {
        if (name == "sw") pvals[i] = shapiro_wilk(x, 0.5).p_value;
        else if (name == "lf") pvals[i] = lilliefors(x, lf_cache, 0.5).p_value;
        else if (name == "ad") pvals[i] = anderson_darling(x, 0.5).p_value;
        else if (name == "jb") pvals[i] = jarque_bera(x, false, 0.5).p_value;
        else if (name == "ajb") pvals[i] = jarque_bera(x, true, 0.5).p_value;
        else if (name == "fssd") {
          FssdConfig cfg;
          cfg.null_sims = a.fssd_sims;
          RandomStream rng = RandomStream(a.seed).substream(i);
          pvals[i] = fssd_test(x, cfg, 0.5, rng).p_value;
        } else {
          throw InvalidParameterError("unknown test " + name);
        }
      } catch (const Error&) {
        pvals[i] = std::numeric_limits<double>::quiet_NaN();
      }
    });
    if (a.roc_dump && both_classes) {
      // p ranks normals higher, keeping test ROCs comparable to the network's
      std::vector<double> scores;
      std::vector<int> lab;
      for (std::size_t i = 0; i < n_records; ++i) {
        if (std::isnan(pvals[i])) continue;
        scores.push_back(pvals[i]);
        lab.push_back(labels[i]);
      }
      write_text("roc_" + name + ".json", roc_to_json(roc(scores, lab)).dump(1) + "\n");
    }
    for (double alpha : a.alphas) {
      std::vector<ScoredRecord> scored;
      scored.reserve(n_records);
      for (std::size_t i = 0; i < n_records; ++i) {
        if (std::isnan(pvals[i])) continue;  // test not applicable
        scored.push_back({sizes[i], pvals[i],
                          pvals[i] < alpha ? 0 : 1, labels[i]});
      }
      std::ostringstream fname;
      fname << name << "_alpha" << alpha << "_by_size.csv";
      write_text(fname.str(), size_report_csv(per_size_report(scored)));
    }
  }

  manifest.write(dir / "evaluate");
  std::cout << "evaluation written to " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// crossval / learncurve
// ---------------------------------------------------------------------------

struct CrossvalArgs {
  std::string data;
  std::string out = "crossval.csv";
  std::string mode = "dbnn";
  int folds = 5;
  std::vector<double> grid_q{0.05, 0.1};
  std::string grid_arch = "100,10;1000";
  std::vector<double> grid_c{0.1, 1.0, 10.0};
  int epochs = 200;
  std::uint64_t seed = 0;
};

int cmd_crossval(const CrossvalArgs& a) {
  Manifest manifest("crossval", a.seed);
  manifest.config() = {{"data", a.data},       {"folds", a.folds},
                       {"grid_q", a.grid_q},   {"grid_arch", a.grid_arch},
                       {"grid_c", a.grid_c},   {"epochs", a.epochs},
                       {"mode", a.mode},       {"seed", a.seed},
                       {"out", a.out}};
  manifest.add_input(a.data);
  const LabeledDataset data = load_dataset(a.data);

  GridSpec grid;
  grid.qs = a.grid_q;
  grid.cs = a.grid_c;
  grid.architectures.clear();
  std::stringstream ss(a.grid_arch);
  std::string tok;
  while (std::getline(ss, tok, ';')) {
    if (!tok.empty()) grid.architectures.push_back(parse_arch(tok));
  }

  NetworkConfig base;
  base.max_epochs = a.epochs;
  RandomStream rng(a.seed);
  const GridSearchResult result = grid_search_cv(
      data, grid, a.folds, base, feature_mode_from_name(a.mode), rng);
  std::ofstream out(a.out, std::ios::trunc);
  if (!out) throw IoError("cannot write " + a.out);
  out << grid_report_csv(result);
  out.close();
  manifest.add_output(a.out);
  manifest.write(a.out);

  const CvCell& best = result.cells[result.best_index];
  std::cout << "best cell: q=" << best.q << " arch=";
  for (std::size_t i = 0; i < best.architecture.size(); ++i) {
    if (i) std::cout << 'x';
    std::cout << best.architecture[i];
  }
  std::cout << " c=" << best.c << " accuracy " << best.acc_mean << " +- "
            << best.acc_sd << "\n";
  return 0;
}

struct LearncurveArgs {
  std::string data;
  std::string out = "learncurve.csv";
  std::string mode = "dbnn";
  std::vector<double> fractions{0.1, 0.325, 0.55, 0.775, 1.0};
  int folds = 20;
  double q = 0.1;
  std::string arch = "100,10";
  double c = 0.1;
  std::uint64_t seed = 0;
};

int cmd_learncurve(const LearncurveArgs& a) {
  Manifest manifest("learncurve", a.seed);
  manifest.config() = {{"data", a.data}, {"fractions", a.fractions},
                       {"folds", a.folds}, {"q", a.q},  {"arch", a.arch},
                       {"c", a.c},        {"mode", a.mode}, {"seed", a.seed},
                       {"out", a.out}};
  manifest.add_input(a.data);
  const LabeledDataset data = load_dataset(a.data);
  NetworkConfig cfg;
  cfg.q = a.q;
  cfg.hidden_layers = parse_arch(a.arch);
  cfg.reg_c = a.c;
  RandomStream rng(a.seed);
  const auto rows = learning_curve(data, a.fractions, a.folds, cfg,
                                   feature_mode_from_name(a.mode), rng);
  std::ofstream out(a.out, std::ios::trunc);
  if (!out) throw IoError("cannot write " + a.out);
  out << "fraction,median_train_acc,median_test_acc,median_fit_time_s,fit_times_s\n";
  for (const auto& r : rows) {
    out << r.fraction << ',' << r.median_train_acc << ',' << r.median_test_acc
        << ',' << r.median_fit_time << ',';
    for (std::size_t i = 0; i < r.fit_times.size(); ++i) {
      if (i) out << ' ';
      out << r.fit_times[i];
    }
    out << '\n';
  }
  out.close();
  manifest.add_output(a.out);
  manifest.write(a.out);
  return 0;
}

struct SplitArgs {
  std::string data;
  std::string out_cv;
  std::string out_test;
  double fraction = 0.7;
  std::uint64_t seed = 0;
};

int cmd_split(const SplitArgs& a) {
  Manifest manifest("split", a.seed);
  manifest.config() = {{"data", a.data},       {"fraction", a.fraction},
                       {"seed", a.seed},       {"out_cv", a.out_cv},
                       {"out_test", a.out_test}};
  manifest.add_input(a.data);
  const LabeledDataset data = load_dataset(a.data);
  RandomStream rng(a.seed);
  auto [cv, test] = split_cv_test(data, a.fraction, rng);
  save_dataset(cv, a.out_cv);
  save_dataset(test, a.out_test);
  manifest.add_output(a.out_cv);
  manifest.add_output(a.out_test);
  manifest.write(a.out_cv);
  std::cout << "wrote " << a.out_cv << " (" << cv.records.size() << ") and "
            << a.out_test << " (" << test.records.size() << ")\n";
  return 0;
}

struct IngestArgs {
  std::string kind = "height";
  std::string input;
  std::string out;
  std::vector<int> sizes{5, 10, 15, 20, 25, 30, 35, 40, 45, 50,
                         55, 60, 65, 70, 75, 80, 85, 90, 95, 100};
  int per_size = 1000;
  std::uint64_t seed = 0;
};

int cmd_ingest(const IngestArgs& a) {
  Manifest manifest("ingest", a.seed);
  manifest.config() = {{"kind", a.kind},   {"input", a.input},
                       {"sizes", a.sizes}, {"per_size", a.per_size},
                       {"seed", a.seed},   {"out", a.out}};
  manifest.add_input(a.input);
  LabeledDataset data;
  if (a.kind == "height") {
    const auto samples = ingest_height_csv(a.input);
    data.meta.name = "height";
    data.meta.master_seed = a.seed;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      Record rec;
      rec.values = samples[i];
      rec.label = 1;  // treated as normal for evaluation
      rec.prov.family = "height_csv";
      rec.prov.seed_index = i;
      data.records.push_back(std::move(rec));
    }
    data.recount();
  } else {
    RandomStream rng(a.seed);
    data = ingest_magnitude_csv(a.input, a.sizes, a.per_size, rng);
  }
  save_dataset(data, a.out);
  manifest.add_output(a.out);
  manifest.write(a.out);
  std::cout << "wrote " << a.out << " (" << data.records.size() << " records)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "normnet: normality testing with classical statistics, a kernel Stein "
      "discrepancy test, and trained neural classifiers.\n"
      "Distribution parameter conventions: Gamma(shape, scale), "
      "Weibull(scale, shape), Lognormal(mu, sigma) on the log scale, "
      "Gumbel(location, scale)."};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* cgen = app.add_subcommand("generate", "Synthesize labeled sample corpora");
  cgen->add_option("--set", gen.set, "A|B|C|D|large")
      ->check(CLI::IsMember({"A", "B", "C", "D", "large"}));
  cgen->add_option("--per-class", gen.per_class, "records per class (A/B/D/large)");
  cgen->add_option("--per-size", gen.per_size, "records per size per group (set C)");
  cgen->add_option("--sizes", gen.sizes, "override sample sizes");
  cgen->add_option("--seed", gen.seed, "master seed");
  cgen->add_option("--out", gen.out, "output dataset path (.jsonl)")->required();

  TrainArgs tr;
  auto* ctr = app.add_subcommand("train", "Train a classifier on a dataset");
  ctr->add_option("--data", tr.data, "training dataset (.jsonl)")->required();
  ctr->add_option("--out", tr.out, "output model path (.json)")->required();
  ctr->add_option("--mode", tr.mode, "dbnn|sbnn")
      ->check(CLI::IsMember({"dbnn", "sbnn"}));
  ctr->add_option("--q", tr.q, "descriptor quantile granularity");
  ctr->add_option("--arch", tr.arch, "hidden layers, e.g. 100,10");
  ctr->add_option("--c", tr.c, "L2 regularization coefficient");
  ctr->add_option("--epochs", tr.epochs, "max epochs");
  ctr->add_option("--batch", tr.batch, "minibatch size");
  ctr->add_option("--patience", tr.patience, "early-stopping patience");
  ctr->add_option("--step", tr.step, "ADAM step size");
  ctr->add_option("--seed", tr.seed, "seed");

  TestArgs te;
  auto* cte = app.add_subcommand("test", "Classify samples and run the tests");
  cte->add_option("--model", te.model, "model file")->required();
  cte->add_option("--input", te.input, "CSV, one sample per line");
  cte->add_option("--sample", te.inline_sample, "inline comma-separated sample");
  cte->add_option("--out", te.out, "output path (default: stdout)");
  cte->add_option("--features-csv", te.features_csv,
                  "also write the per-sample feature rows (descriptor column "
                  "order: quantiles..., n, mean, sd, min, max, median)");
  cte->add_option("--alpha", te.alpha, "test level");
  cte->add_option("--fssd-sims", te.fssd_sims, "FSSD bootstrap simulations");
  cte->add_option("--lf-edf", te.lf_edf,
                  "Lilliefors EDF convention: classical (two-sided) or "
                  "sample-points (|EDF - Phi| at sample points only)")
      ->check(CLI::IsMember({"classical", "sample-points"}));
  cte->add_option("--seed", te.seed, "seed");

  EvaluateArgs ev;
  auto* cev = app.add_subcommand("evaluate", "Metric tables, ROC and calibration");
  cev->add_option("--model", ev.model, "model file")->required();
  cev->add_option("--data", ev.data, "dataset (.jsonl)")->required();
  cev->add_option("--out-dir", ev.out_dir, "output directory");
  cev->add_option("--alpha", ev.alphas, "test levels (repeatable)");
  cev->add_option("--tests", ev.tests, "tests to run: sw lf ad jb ajb fssd");
  cev->add_flag("--roc", ev.roc_dump, "write ROC JSON dumps");
  cev->add_flag("--reliability", ev.reliability_diagram, "write reliability CSV");
  cev->add_option("--bins", ev.bins, "reliability bins");
  cev->add_option("--reliability-subsets", ev.reliability_subsets,
                  "also diagram K random subsets");
  cev->add_option("--reliability-subset-size", ev.reliability_subset_size,
                  "subset size for --reliability-subsets");
  cev->add_flag("--optimize-threshold", ev.optimize_threshold,
                "per-size ROC-optimal thresholds");
  cev->add_option("--fssd-sims", ev.fssd_sims, "FSSD bootstrap simulations");
  cev->add_option("--lf-sims", ev.lf_sims, "Lilliefors null-table simulations");
  cev->add_option("--seed", ev.seed, "seed");

  CrossvalArgs cv;
  auto* ccv = app.add_subcommand("crossval", "Grid-search cross-validation report");
  ccv->add_option("--data", cv.data, "dataset (.jsonl)")->required();
  ccv->add_option("--out", cv.out, "report CSV path");
  ccv->add_option("--mode", cv.mode, "dbnn|sbnn")
      ->check(CLI::IsMember({"dbnn", "sbnn"}));
  ccv->add_option("--folds", cv.folds, "cross-validation folds");
  ccv->add_option("--grid-q", cv.grid_q, "q grid");
  ccv->add_option("--grid-arch", cv.grid_arch, "architectures, e.g. '100,10;1000'");
  ccv->add_option("--grid-c", cv.grid_c, "regularization grid");
  ccv->add_option("--epochs", cv.epochs, "max epochs");
  ccv->add_option("--seed", cv.seed, "seed");

  SplitArgs sp;
  auto* csp = app.add_subcommand("split", "Stratified cv/test split of a dataset");
  csp->add_option("--data", sp.data, "dataset (.jsonl)")->required();
  csp->add_option("--fraction", sp.fraction, "cv fraction (default 0.7)");
  csp->add_option("--out-cv", sp.out_cv, "cv output path")->required();
  csp->add_option("--out-test", sp.out_test, "test output path")->required();
  csp->add_option("--seed", sp.seed, "seed");

  IngestArgs ig;
  auto* cig = app.add_subcommand("ingest", "Convert real-world CSV data to a dataset");
  cig->add_option("--kind", ig.kind, "height|magnitude")
      ->check(CLI::IsMember({"height", "magnitude"}));
  cig->add_option("--input", ig.input, "CSV file")->required();
  cig->add_option("--out", ig.out, "output dataset path (.jsonl)")->required();
  cig->add_option("--sizes", ig.sizes, "subsample sizes (magnitude)");
  cig->add_option("--per-size", ig.per_size, "subsamples per size (magnitude)");
  cig->add_option("--seed", ig.seed, "seed");

  LearncurveArgs lc;
  auto* clc = app.add_subcommand("learncurve", "Median learning curves and fit times");
  clc->add_option("--data", lc.data, "dataset (.jsonl)")->required();
  clc->add_option("--out", lc.out, "output CSV");
  clc->add_option("--mode", lc.mode, "dbnn|sbnn")
      ->check(CLI::IsMember({"dbnn", "sbnn"}));
  clc->add_option("--fractions", lc.fractions, "training-set fractions");
  clc->add_option("--folds", lc.folds, "folds per fraction");
  clc->add_option("--q", lc.q, "descriptor granularity");
  clc->add_option("--arch", lc.arch, "hidden layers");
  clc->add_option("--c", lc.c, "regularization");
  clc->add_option("--seed", lc.seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (cgen->parsed()) return cmd_generate(gen);
    if (ctr->parsed()) return cmd_train(tr);
    if (cte->parsed()) return cmd_test(te);
    if (cev->parsed()) return cmd_evaluate(ev);
    if (ccv->parsed()) return cmd_crossval(cv);
    if (csp->parsed()) return cmd_split(sp);
    if (cig->parsed()) return cmd_ingest(ig);
    if (clc->parsed()) return cmd_learncurve(lc);
  } catch (const IoError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const MalformedCsvError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const MissingColumnError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const FormatVersionMismatchError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const CatalogTooSmallError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
