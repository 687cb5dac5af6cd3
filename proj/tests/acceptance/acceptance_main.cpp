// Acceptance suite: one criterion per invocation, one PASS/FAIL line per
// criterion, nonzero exit when a gated check fails. Expensive artifacts
// (datasets, the trained network) are cached in --work-dir and shared by
// later criteria. All tolerances are pinned here, in code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdarg>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

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

constexpr std::uint64_t kSeedA = 20240601;
constexpr std::uint64_t kSeedSplit = 20240602;
constexpr std::uint64_t kSeedTrain = 20240603;
constexpr std::uint64_t kSeedD = 20240604;
constexpr std::uint64_t kSeedG4 = 20240605;
constexpr std::uint64_t kSeedLarge = 20240606;
constexpr std::uint64_t kSeedGrid = 20240607;
constexpr std::uint64_t kSeedDesk = 20240608;
constexpr std::uint64_t kSeedTypeI = 20240609;
constexpr std::uint64_t kSeedProps = 20240610;

fs::path g_work = "acceptance-work";

struct CheckList {
  int passed = 0;
  int failed = 0;

  void check(bool ok, const std::string& what) {
    (ok ? passed : failed)++;
    std::printf("  [%s] %s\n", ok ? "ok" : "FAIL", what.c_str());
  }

  void note(const std::string& what) { std::printf("  (%s)\n", what.c_str()); }

  int finish(int criterion, double seconds) {
    std::printf("criterion %d: %s (%d checks, %d failed, %.1f s)\n", criterion,
                failed == 0 ? "PASS" : "FAIL", passed + failed, failed, seconds);
    return failed == 0 ? 0 : 1;
  }
};

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------------------
// shared artifacts
// ---------------------------------------------------------------------------

LabeledDataset ensure_pearson_set(const std::string& name, int per_class,
                                  const std::vector<int>& sizes,
                                  std::uint64_t seed) {
  const fs::path path = g_work / (name + ".jsonl");
  if (fs::exists(path)) return load_dataset(path);
  GenSpec spec;
  spec.sizes = sizes;
  spec.per_class_total = per_class;
  spec.master_seed = seed;
  spec.name = name;
  LabeledDataset d = generate_pearson_style_set(spec);
  fs::create_directories(g_work);
  save_dataset(d, path);
  return d;
}

std::pair<LabeledDataset, LabeledDataset> ensure_split_A() {
  const fs::path cv_path = g_work / "a_cv.jsonl";
  const fs::path test_path = g_work / "a_test.jsonl";
  if (fs::exists(cv_path) && fs::exists(test_path)) {
    return {load_dataset(cv_path), load_dataset(test_path)};
  }
  LabeledDataset a = ensure_pearson_set(
      "a_full", 13050, {10, 20, 30, 40, 50, 60, 70, 80, 90, 100}, kSeedA);
  RandomStream rng(kSeedSplit);
  auto [cv, test] = split_cv_test(a, 0.7, rng);
  save_dataset(cv, cv_path);
  save_dataset(test, test_path);
  return {std::move(cv), std::move(test)};
}

NetworkConfig reference_config() {
  NetworkConfig cfg;
  cfg.q = 0.1;
  cfg.hidden_layers = {100, 10};
  cfg.reg_c = 0.1;
  cfg.max_epochs = 200;
  cfg.batch_size = 128;
  cfg.seed = kSeedTrain;
  return cfg;
}

LoadedModel ensure_model() {
  const fs::path path = g_work / "dbnn.json";
  if (fs::exists(path)) return load_model(path);
  auto [cv, test] = ensure_split_A();
  auto [net, report] = train_classifier(cv, reference_config(),
                                        FeatureMode::Descriptor);
  std::printf("  (trained dbnn on a_cv: %d epochs, %.1f s)\n", report.epochs_run,
              report.wall_time_seconds);
  save_model(net, FeatureMode::Descriptor, path);
  return load_model(path);
}

std::vector<double> network_scores(const Network& net,
                                   const LabeledDataset& data) {
  std::vector<double> p1(data.records.size());
  parallel_for(data.records.size(), [&](std::size_t i) {
    const auto f =
        features_for(data.records[i].values, FeatureMode::Descriptor, net.config.q);
    p1[i] = forward(net, f);
  });
  return p1;
}

// p-values for one classical test across a dataset (NaN when not applicable)
std::vector<double> test_pvalues(const std::string& name,
                                 const LabeledDataset& data,
                                 LillieforsNullCache* lf_cache,
                                 std::uint64_t fssd_seed = 1, int fssd_sims = 200) {
  std::vector<double> p(data.records.size());
  if (lf_cache) {
    // warm the tables single-threaded to keep the parallel loop read-only
    std::map<int, bool> ns;
    for (const auto& r : data.records) ns[static_cast<int>(r.values.size())] = true;
    for (const auto& [n, unused] : ns) (void)lf_cache->table(n);
  }
  RandomStream root(fssd_seed);
  parallel_for(data.records.size(), [&](std::size_t i) {
    const Sample& x = data.records[i].values;
    try {
      if (name == "sw") p[i] = shapiro_wilk(x, 0.5).p_value;
      else if (name == "lf") p[i] = lilliefors(x, *lf_cache, 0.5).p_value;
      else if (name == "ad") p[i] = anderson_darling(x, 0.5).p_value;
      else if (name == "jb") p[i] = jarque_bera(x, false, 0.5).p_value;
      else {
        FssdConfig cfg;
        cfg.null_sims = fssd_sims;
        RandomStream rng = root.substream(i);
        p[i] = fssd_test(x, cfg, 0.5, rng).p_value;
      }
    } catch (const Error&) {
      p[i] = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return p;
}

// Tests rank by 1 - p as a non-normality detector; with label 1 = normal
// the equivalent orientation is score = p (AUROC(1-p, label 0 positive)
// equals AUROC(p, label 1 positive)), which keeps every method comparable
// on one axis where higher means "more normal".
double auroc_from_pvalues(const std::vector<double>& pvals,
                          const std::vector<int>& labels) {
  std::vector<double> scores;
  std::vector<int> lab;
  for (std::size_t i = 0; i < pvals.size(); ++i) {
    if (std::isnan(pvals[i])) continue;
    scores.push_back(pvals[i]);
    lab.push_back(labels[i]);
  }
  return roc(scores, lab).auroc;
}

// ---------------------------------------------------------------------------
// criterion 1: golden statistic oracles
// ---------------------------------------------------------------------------

int criterion_1() {
  Timer timer;
  CheckList checks;
  std::ifstream in(fs::path(NORMNET_TEST_DATA_DIR) / "golden_stats.json");
  if (!in) {
    checks.check(false, "golden_stats.json present");
    return checks.finish(1, timer.seconds());
  }
  json golden;
  in >> golden;

  LillieforsNullCache lf_cache(g_work / "lf-cache", 50000, 0x4c46);
  int max_bad = 0;
  double worst_stat = 0.0, worst_p = 0.0;
  for (const auto& rec : golden.at("records")) {
    const std::vector<double> x = rec.at("values").get<std::vector<double>>();
    const int n = rec.at("n").get<int>();

    const TestOutcome sw = shapiro_wilk(x, 0.05);
    worst_stat = std::max(worst_stat,
                          std::fabs(sw.statistic - rec.at("sw_w").get<double>()));
    worst_p = std::max(worst_p, std::fabs(sw.p_value - rec.at("sw_p").get<double>()));

    const double d = lilliefors_statistic(x);
    worst_stat = std::max(worst_stat, std::fabs(d - rec.at("lf_d").get<double>()));
    // Monte Carlo p-values agree to 3 combined simulation sigmas
    const double p_ref = rec.at("lf_p_ref").get<double>();
    const double ref_sims = rec.at("lf_ref_sims").get<double>();
    const double p_impl = lf_cache.p_value(d, n);
    const double sigma = std::sqrt(std::max(p_ref * (1 - p_ref), 1e-9) *
                                   (1.0 / ref_sims + 1.0 / 50000.0));
    if (std::fabs(p_impl - p_ref) > 3.0 * sigma + 1e-4) {
      ++max_bad;
      checks.note(fmt("lf p mismatch n=%d: %.5f vs ref %.5f (3sig %.5f)", n,
                      p_impl, p_ref, 3.0 * sigma));
    }

    const TestOutcome ad = anderson_darling(x, 0.05);
    worst_stat = std::max(worst_stat,
                          std::fabs(ad.statistic - rec.at("ad_a").get<double>()));
    worst_p = std::max(worst_p, std::fabs(ad.p_value - rec.at("ad_p").get<double>()));

    worst_stat = std::max(worst_stat, std::fabs(cramer_von_mises(x) -
                                                rec.at("cvm_c").get<double>()));

    if (!rec.at("jb").is_null()) {
      const TestOutcome jb = jarque_bera(x, false, 0.05);
      worst_stat = std::max(worst_stat,
                            std::fabs(jb.statistic - rec.at("jb").get<double>()));
      worst_p = std::max(worst_p, std::fabs(jb.p_value - rec.at("jb_p").get<double>()));
      const TestOutcome ajb = jarque_bera(x, true, 0.05);
      worst_stat = std::max(worst_stat,
                            std::fabs(ajb.statistic - rec.at("ajb").get<double>()));
      worst_p = std::max(worst_p,
                         std::fabs(ajb.p_value - rec.at("ajb_p").get<double>()));
    }
  }
  checks.check(worst_stat < 1e-6,
               fmt("statistics match the reference to 1e-6 (worst %.2e)", worst_stat));
  checks.check(worst_p < 1e-3,
               fmt("analytic p-values match to 1e-3 (worst %.2e)", worst_p));
  checks.check(max_bad == 0,
               fmt("Monte Carlo p-values within 3 simulation sigmas (%d outside)",
                   max_bad));
  checks.check(timer.seconds() < 60.0, fmt("runtime %.1f s < 60 s", timer.seconds()));
  return checks.finish(1, timer.seconds());
}

// ---------------------------------------------------------------------------
// criterion 2: Type-I calibration
// ---------------------------------------------------------------------------

int criterion_2() {
  Timer timer;
  CheckList checks;
  const int trials = 10000;
  const double alphas[] = {0.01, 0.05, 0.1};
  LillieforsNullCache lf_cache(g_work / "lf-cache", 50000, 0x4c46);

  for (int n : {20, 50, 100}) {
    (void)lf_cache.table(n);
    std::vector<double> p_sw(trials), p_lf(trials), p_ad(trials), p_jb(trials);
    RandomStream root = RandomStream(kSeedTypeI).substream(static_cast<std::uint64_t>(n));
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
      RandomStream rng = root.substream(t);
      const double mu = rng.uniform(-100.0, 100.0);
      const double sd = rng.uniform(1.0, 20.0);
      std::vector<double> x(static_cast<std::size_t>(n));
      for (auto& v : x) v = rng.normal(mu, sd);
      p_sw[t] = shapiro_wilk(x, 0.5).p_value;
      p_lf[t] = lilliefors(x, lf_cache, 0.5).p_value;
      p_ad[t] = anderson_darling(x, 0.5).p_value;
      p_jb[t] = jarque_bera(x, false, 0.5).p_value;
    });
    const struct {
      const char* name;
      const std::vector<double>* p;
    } tests[] = {{"SW", &p_sw}, {"LF", &p_lf}, {"AD", &p_ad}, {"JB", &p_jb}};
    for (const auto& t : tests) {
      for (double alpha : alphas) {
        long rej = 0;
        for (double p : *t.p) rej += p < alpha;
        const double rate = static_cast<double>(rej) / trials;
        checks.check(std::fabs(rate - alpha) <= 0.01,
                     fmt("%s n=%d alpha=%.2f: rejection rate %.4f within +-0.01",
                         t.name, n, alpha, rate));
      }
    }
  }
  checks.note(
      "JB rows use the pinned chi-squared(2) p-value; its finite-n size error "
      "exceeds the band; this is a property of that approximation, not of "
      "the implementation (see README)");
  checks.check(timer.seconds() < 600.0, fmt("runtime %.1f s < 600 s", timer.seconds()));
  return checks.finish(2, timer.seconds());
}

// ---------------------------------------------------------------------------
// criterion 3: gradient check
// ---------------------------------------------------------------------------

int criterion_3() {
  Timer timer;
  CheckList checks;
  RandomStream rng(kSeedProps);
  int bad_coords = 0;
  long probed = 0, kink_skipped = 0;
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    NetworkConfig cfg;
    cfg.hidden_layers = {static_cast<int>(2 + rng.next_u64() % 12)};
    if (rng.uniform() < 0.5) {
      cfg.hidden_layers.push_back(static_cast<int>(2 + rng.next_u64() % 6));
    }
    cfg.reg_c = rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.0, 2.0);
    cfg.seed = 1000 + static_cast<std::uint64_t>(rep);
    const int dim = static_cast<int>(2 + rng.next_u64() % 10);
    Network net = init_network(cfg, dim);
    // probe at a generic point: zero biases put dead-input samples exactly
    // on the ReLU kink (z identically 0), where the loss is not
    // differentiable and finite differences legitimately disagree
    for (auto& b : net.biases) {
      for (Eigen::Index r = 0; r < b.size(); ++r) {
        b(r) = 0.2 * rng.normal();
      }
    }
    const int batch = static_cast<int>(2 + rng.next_u64() % 6);
    Eigen::MatrixXd X(dim, batch);
    std::vector<int> y(static_cast<std::size_t>(batch));
    for (int c = 0; c < batch; ++c) {
      for (int r = 0; r < dim; ++r) X(r, c) = rng.normal();
      y[static_cast<std::size_t>(c)] = static_cast<int>(rng.next_u64() % 2);
    }
    Gradients g;
    (void)loss_and_gradient(net, X, y, &g);
    const double h = 1e-5;
    auto central = [&](double& w, double keep, double step) {
      w = keep + step;
      const double up = loss_and_gradient(net, X, y, nullptr);
      w = keep - step;
      const double dn = loss_and_gradient(net, X, y, nullptr);
      w = keep;
      return (up - dn) / (2.0 * step);
    };
    auto probe = [&](double& w, double analytic) {
      const double keep = w;
      const double fd = central(w, keep, h);
      // a ReLU kink inside the stencil invalidates the difference quotient;
      // detect it by step halving (smooth coordinates are h^2-consistent)
      const double fd_half = central(w, keep, h / 2.0);
      const double scale = std::max({std::fabs(fd), std::fabs(analytic), 1e-6});
      if (std::fabs(fd - fd_half) > 1e-6 * std::max(scale, 1.0)) {
        ++kink_skipped;
        return;
      }
      ++probed;
      const double rel = std::fabs(fd - analytic) / scale;
      worst = std::max(worst, rel);
      if (rel >= 1e-5) ++bad_coords;
    };
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      for (int r = 0; r < net.weights[l].rows(); ++r) {
        for (int c = 0; c < net.weights[l].cols(); ++c) {
          probe(net.weights[l](r, c), g.w[l](r, c));
        }
      }
      for (int r = 0; r < net.biases[l].size(); ++r) {
        probe(net.biases[l](r), g.b[l](r));
      }
    }
  }
  checks.check(bad_coords == 0,
               fmt("50 random configurations, %ld coordinates agree with central "
                   "differences (worst rel err %.2e)",
                   probed, worst));
  checks.check(kink_skipped * 1000 <= probed,
               fmt("kink-contaminated coordinates are rare (%ld skipped by the "
                   "step-halving validity check)",
                   kink_skipped));
  checks.check(timer.seconds() < 60.0, fmt("runtime %.1f s < 60 s", timer.seconds()));
  return checks.finish(3, timer.seconds());
}

// ---------------------------------------------------------------------------
// criterion 4: cross-validation reproduction
// ---------------------------------------------------------------------------

int criterion_4() {
  Timer timer;
  CheckList checks;
  auto [cv, test] = ensure_split_A();
  std::printf("  (a_cv: %zu records)\n", cv.records.size());

  GridSpec grid;  // the 12-cell grid
  NetworkConfig base = reference_config();
  RandomStream rng(kSeedGrid);
  const GridSearchResult result =
      grid_search_cv(cv, grid, 5, base, FeatureMode::Descriptor, rng, 0);
  double min_cell = 1.0;
  for (const auto& cell : result.cells) {
    std::printf("  cell q=%.2f arch=%s c=%-4g acc %.4f +- %.4f (%.1f s/fit)\n",
                cell.q, cell.architecture.size() == 2 ? "100,10" : "1000", cell.c,
                cell.acc_mean, cell.acc_sd, cell.time_mean);
    min_cell = std::min(min_cell, cell.acc_mean);
  }
  const CvCell& best = result.cells[result.best_index];
  checks.check(best.acc_mean >= 0.885 && best.acc_mean <= 0.925,
               fmt("best cell mean CV accuracy %.4f in [0.885, 0.925]",
                   best.acc_mean));
  checks.check(min_cell >= 0.85,
               fmt("all 12 cells >= 0.85 (minimum %.4f)", min_cell));

  // desk scale: the reference configuration at 2,000 per class
  LabeledDataset desk = ensure_pearson_set(
      "a_desk", 2000, {10, 20, 30, 40, 50, 60, 70, 80, 90, 100}, kSeedDesk);
  RandomStream desk_rng(kSeedDesk + 1);
  auto [desk_cv, desk_test] = split_cv_test(desk, 0.7, desk_rng);
  GridSpec one_cell;
  one_cell.qs = {0.1};
  one_cell.architectures = {{100, 10}};
  one_cell.cs = {0.1};
  RandomStream rng2(kSeedGrid + 1);
  const GridSearchResult desk_result =
      grid_search_cv(desk_cv, one_cell, 5, base, FeatureMode::Descriptor, rng2, 0);
  checks.check(desk_result.cells[0].acc_mean >= 0.85,
               fmt("desk-scale best-config CV accuracy %.4f >= 0.85",
                   desk_result.cells[0].acc_mean));
  checks.check(timer.seconds() < 1800.0,
               fmt("runtime %.1f s < 1800 s", timer.seconds()));
  return checks.finish(4, timer.seconds());
}

// ---------------------------------------------------------------------------
// criterion 5: overall discrimination on a regenerated set D
// ---------------------------------------------------------------------------

int criterion_5() {
  Timer timer;
  CheckList checks;
  const LoadedModel model = ensure_model();
  LabeledDataset d = ensure_pearson_set(
      "d_full", 13050, {10, 20, 30, 40, 50, 60, 70, 80, 90, 100}, kSeedD);
  std::vector<int> labels(d.records.size());
  for (std::size_t i = 0; i < d.records.size(); ++i) labels[i] = d.records[i].label;

  const std::vector<double> p1 = network_scores(model.net, d);
  const double net_auroc = roc(p1, labels).auroc;
  checks.check(net_auroc >= 0.95, fmt("network AUROC %.4f >= 0.95", net_auroc));

  LillieforsNullCache lf_cache(g_work / "lf-cache", 10000, 0x4c46);
  for (const char* name : {"sw", "lf", "ad", "jb", "fssd"}) {
    const auto pv = test_pvalues(name, d, &lf_cache, kSeedD + 99);
    const double a = auroc_from_pvalues(pv, labels);
    checks.check(net_auroc > a,
                 fmt("network AUROC %.4f strictly exceeds %s AUROC %.4f", net_auroc,
                     name, a));
  }
  checks.check(timer.seconds() < 1200.0,
               fmt("runtime %.1f s < 1200 s", timer.seconds()));
  return checks.finish(5, timer.seconds());
}

// ---------------------------------------------------------------------------
// criterion 6: power dominance on G4
// ---------------------------------------------------------------------------

int criterion_6() {
  Timer timer;
  CheckList checks;
  const LoadedModel model = ensure_model();
  const std::vector<int> sizes{10, 20, 30, 40, 50, 60, 70};
  const fs::path path = g_work / "g4.jsonl";
  LabeledDataset g4;
  if (fs::exists(path)) {
    g4 = load_dataset(path);
  } else {
    g4 = generate_group_set(Group::G4, sizes, 1000, kSeedG4);
    save_dataset(g4, path);
  }

  const std::vector<double> p1 = network_scores(model.net, g4);
  std::map<int, std::pair<long, long>> rejected;  // n -> (rejected, total)
  for (std::size_t i = 0; i < g4.records.size(); ++i) {
    const int n = static_cast<int>(g4.records[i].values.size());
    auto& [rej, total] = rejected[n];
    ++total;
    rej += classify(model.net, p1[i]) == 0;
  }
  for (int n : sizes) {
    const auto [rej, total] = rejected[n];
    const double tnr = static_cast<double>(rej) / static_cast<double>(total);
    checks.check(tnr >= 0.98, fmt("network TNR at n=%d: %.4f >= 0.98", n, tnr));
  }

  const auto pv = test_pvalues("fssd", g4, nullptr, kSeedG4 + 7);
  long rej = 0, total = 0;
  for (double p : pv) {
    if (std::isnan(p)) continue;
    ++total;
    rej += p < 0.1;
  }
  const double fssd_tnr = static_cast<double>(rej) / static_cast<double>(total);
  checks.check(fssd_tnr <= 0.05,
               fmt("FSSD TNR %.4f <= 0.05 at alpha=0.1", fssd_tnr));
  checks.check(timer.seconds() < 900.0,
               fmt("runtime %.1f s < 900 s", timer.seconds()));
  return checks.finish(6, timer.seconds());
}

// ---------------------------------------------------------------------------
// criterion 7: threshold optimization on large samples
// ---------------------------------------------------------------------------

int criterion_7() {
  Timer timer;
  CheckList checks;
  const LoadedModel model = ensure_model();
  LabeledDataset large =
      ensure_pearson_set("large", 7830, {250, 500, 1000}, kSeedLarge);

  const std::vector<double> p1 = network_scores(model.net, large);
  std::map<int, std::vector<std::size_t>> by_size;
  for (std::size_t i = 0; i < large.records.size(); ++i) {
    by_size[static_cast<int>(large.records[i].values.size())].push_back(i);
  }
  std::vector<double> default_tprs;
  for (const auto& [n, idx] : by_size) {
    std::vector<double> scores;
    std::vector<int> lab;
    for (std::size_t i : idx) {
      scores.push_back(p1[i]);
      lab.push_back(large.records[i].label);
    }
    const RocCurve curve = roc(scores, lab);
    auto rates = [&](double thr) {
      long tp = 0, fn = 0, tn = 0, fp = 0;
      for (std::size_t k = 0; k < scores.size(); ++k) {
        const int pred = scores[k] >= thr ? 1 : 0;
        if (lab[k] == 1) (pred ? tp : fn)++;
        else (pred ? fp : tn)++;
      }
      return std::pair<double, double>{
          static_cast<double>(tp) / static_cast<double>(tp + fn),
          static_cast<double>(tn) / static_cast<double>(tn + fp)};
    };
    const auto [dtpr, dtnr] = rates(0.5);
    default_tprs.push_back(dtpr);
    checks.check(curve.auroc >= 0.98, fmt("n=%d AUROC %.4f >= 0.98", n, curve.auroc));
    const double thr = optimal_threshold(curve);
    const auto [otpr, otnr] = rates(thr);
    std::printf("  n=%d default tpr/tnr %.4f/%.4f; optimal threshold %.4g -> "
                "%.4f/%.4f\n",
                n, dtpr, dtnr, thr, otpr, otnr);
    checks.check(otpr >= 0.95, fmt("n=%d optimized TPR %.4f >= 0.95", n, otpr));
    checks.check(otnr >= 0.93, fmt("n=%d optimized TNR %.4f >= 0.93", n, otnr));
  }
  checks.check(default_tprs.size() == 3 && default_tprs[0] >= default_tprs[1] &&
                   default_tprs[1] >= default_tprs[2],
               fmt("default-threshold TPR degrades monotonically with n "
                   "(%.4f, %.4f, %.4f)",
                   default_tprs[0], default_tprs[1], default_tprs[2]));
  checks.check(timer.seconds() < 1200.0,
               fmt("runtime %.1f s < 1200 s", timer.seconds()));
  return checks.finish(7, timer.seconds());
}

// ---------------------------------------------------------------------------
// criterion 8: calibration on set D
// ---------------------------------------------------------------------------

int criterion_8() {
  Timer timer;
  CheckList checks;
  const LoadedModel model = ensure_model();
  LabeledDataset d = ensure_pearson_set(
      "d_full", 13050, {10, 20, 30, 40, 50, 60, 70, 80, 90, 100}, kSeedD);
  std::vector<int> labels(d.records.size());
  for (std::size_t i = 0; i < d.records.size(); ++i) labels[i] = d.records[i].label;
  const std::vector<double> p1 = network_scores(model.net, d);

  const auto bins = reliability(p1, labels, 10);
  double worst = 0.0;
  int min_count = 1 << 30;
  for (const auto& b : bins) {
    worst = std::max(worst, std::fabs(b.empirical_rate - b.mean_predicted));
    min_count = std::min(min_count, b.count);
    std::printf("  bin mean_pred %.3f empirical %.3f count %d\n", b.mean_predicted,
                b.empirical_rate, b.count);
  }
  checks.check(min_count >= 1000, fmt("every decile holds >= 1000 points (min %d)",
                                      min_count));
  checks.check(worst <= 0.1,
               fmt("every decile |empirical - mean predicted| <= 0.1 (worst %.4f)",
                   worst));
  return checks.finish(8, timer.seconds());
}

// ---------------------------------------------------------------------------
// criterion 9: property suites
// ---------------------------------------------------------------------------

int criterion_9() {
  Timer timer;
  CheckList checks;
  RandomStream rng(kSeedProps);

  // affine invariance of all statistics and descriptor quantiles
  {
    double worst = 0.0;
    bool fssd_p_ok = true;
    for (int rep = 0; rep < 25; ++rep) {
      const int n = 12 + static_cast<int>(rng.next_u64() % 80);
      std::vector<double> x(static_cast<std::size_t>(n));
      for (auto& v : x) {
        v = rep % 2 == 0 ? rng.normal(3.0, 2.0) : rng.gamma(2.0, 1.5);
      }
      const double a = rng.uniform(0.1, 10.0);
      const double b = rng.uniform(-50.0, 50.0);
      std::vector<double> y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = a * x[i] + b;
      auto rel = [](double u, double v) {
        return std::fabs(u - v) / std::max({std::fabs(u), std::fabs(v), 1e-12});
      };
      worst = std::max(worst, rel(shapiro_wilk_statistic(x), shapiro_wilk_statistic(y)));
      worst = std::max(worst, rel(lilliefors_statistic(x), lilliefors_statistic(y)));
      worst = std::max(worst,
                       rel(anderson_darling_statistic(x), anderson_darling_statistic(y)));
      worst = std::max(worst, rel(cramer_von_mises(x), cramer_von_mises(y)));
      worst = std::max(worst, rel(jarque_bera_statistic(x, false),
                                  jarque_bera_statistic(y, false)));
      const Descriptor dx = descriptor(x, 0.1);
      const Descriptor dy = descriptor(y, 0.1);
      for (std::size_t i = 0; i < dx.quantiles.size(); ++i) {
        worst = std::max(worst, std::fabs(dx.quantiles[i] - dy.quantiles[i]) /
                                    std::max(std::fabs(dx.quantiles[i]), 1e-9));
      }
      if (rep < 5) {
        FssdConfig cfg;
        cfg.null_sims = 100;
        RandomStream r1(55 + rep), r2(55 + rep);
        fssd_p_ok = fssd_p_ok && fssd_test(x, cfg, 0.1, r1).p_value ==
                                     fssd_test(y, cfg, 0.1, r2).p_value;
      }
    }
    checks.check(worst < 1e-9,
                 fmt("test statistics and descriptor quantiles affine-invariant "
                     "to 1e-9 (worst %.2e)",
                     worst));
    checks.check(fssd_p_ok, "FSSD p-values affine-invariant at fixed seed");
  }

  // AUROC equals the Mann-Whitney pair statistic
  {
    double worst = 0.0;
    for (int rep = 0; rep < 30; ++rep) {
      const int n = 10 + static_cast<int>(rng.next_u64() % 990);
      std::vector<double> s(static_cast<std::size_t>(n));
      std::vector<int> y(static_cast<std::size_t>(n));
      bool pos = false, neg = false;
      for (int i = 0; i < n; ++i) {
        y[static_cast<std::size_t>(i)] = static_cast<int>(rng.next_u64() % 2);
        double v = rng.normal(0.5 * y[static_cast<std::size_t>(i)], 1.0);
        if (rep % 3 == 0) v = std::round(v * 3.0) / 3.0;  // ties
        s[static_cast<std::size_t>(i)] = v;
        (y[static_cast<std::size_t>(i)] ? pos : neg) = true;
      }
      if (!pos || !neg) continue;
      double num = 0.0;
      long pairs = 0;
      for (int i = 0; i < n; ++i) {
        if (y[static_cast<std::size_t>(i)] != 1) continue;
        for (int j = 0; j < n; ++j) {
          if (y[static_cast<std::size_t>(j)] != 0) continue;
          ++pairs;
          if (s[static_cast<std::size_t>(i)] > s[static_cast<std::size_t>(j)]) num += 1.0;
          else if (s[static_cast<std::size_t>(i)] == s[static_cast<std::size_t>(j)]) num += 0.5;
        }
      }
      worst = std::max(worst, std::fabs(roc(s, y).auroc - num / pairs));
    }
    checks.check(worst < 1e-10,
                 fmt("AUROC equals the Mann-Whitney oracle to 1e-10 (worst %.2e)",
                     worst));
  }

  // Pearson sampler moment matching on the coarse grid. Where the moment
  // estimator itself has finite variance (8th moment exists) the sampled
  // skewness/kurtosis are gated against the targets with batching-based
  // standard errors. Members whose tails make those estimators
  // infinite-variance (the sampled kurtosis swings by +-1.5 at 1e6 draws)
  // are instead gated against truncated moments of the defining density
  // computed by independent quadrature, which the CLT can certify.
  {
    const int total = 1000000;
    const int batches = 100;
    const int batch_n = total / batches;
    for (double skew : {0.0, 1.0, 2.0}) {
      for (double kurt : {3.5, 6.0, 10.0}) {
        if (!pearson_feasible(skew, kurt)) continue;
        PearsonSampler sampler(pearson_from_moments(0.0, 1.0, skew, kurt));
        RandomStream draw_rng = rng.substream(
            static_cast<std::uint64_t>(skew * 10 + kurt * 1000));
        std::vector<double> all(static_cast<std::size_t>(total));
        for (auto& v : all) v = sampler.draw(draw_rng);

        // Bounded members (I/II) and the Gamma line (III) leave all estimator
        // moments finite; for the polynomial-tailed families the density
        // behaves like |x|^(1/b2), so estimator moments exist below
        // -1/b2 - 1 and the kurtosis estimator needs that to exceed 8.
        const PearsonSpec shape = pearson_from_moments(0.0, 1.0, skew, kurt);
        const double c_den = 10.0 * kurt - 12.0 * skew * skew - 18.0;
        const double b2 = shape.b2;
        const bool light_tail = shape.type == PearsonType::Gaussian ||
                                shape.type == PearsonType::I ||
                                shape.type == PearsonType::II ||
                                shape.type == PearsonType::III;
        const double p_max = light_tail ? 1e9 : -1.0 / b2 - 1.0;

        if (p_max > 8.0) {
          std::vector<double> bskew(batches), bkurt(batches);
          for (int b = 0; b < batches; ++b) {
            std::span<const double> part(all.data() + b * batch_n,
                                         static_cast<std::size_t>(batch_n));
            bskew[static_cast<std::size_t>(b)] = skewness(part);
            bkurt[static_cast<std::size_t>(b)] = kurtosis(part);
          }
          auto sd_of = [&](const std::vector<double>& v) {
            double m = 0.0;
            for (double t : v) m += t;
            m /= batches;
            double ss = 0.0;
            for (double t : v) ss += (t - m) * (t - m);
            return std::sqrt(ss / (batches - 1.0));
          };
          const double se_skew =
              sd_of(bskew) / std::sqrt(static_cast<double>(batches));
          const double se_kurt =
              sd_of(bkurt) / std::sqrt(static_cast<double>(batches));
          const double est_skew = skewness(all);
          const double est_kurt = kurtosis(all);
          checks.check(std::fabs(est_skew - skew) <= 5.0 * se_skew + 1e-3,
                       fmt("pearson(%g,%g) skewness %.3f within 5 se of target",
                           skew, kurt, est_skew));
          checks.check(std::fabs(est_kurt - kurt) <= 5.0 * se_kurt + 1e-2,
                       fmt("pearson(%g,%g) kurtosis %.3f within 5 se of target",
                           skew, kurt, est_kurt));
          continue;
        }

        // heavy-tail branch: truncated raw moments vs independent quadrature
        const double a_c = -skew * (kurt + 3.0) / c_den;
        const double b0 = -(4.0 * kurt - 3.0 * skew * skew) / c_den;
        const double b1 = a_c;
        auto log_density = [&](double x) {
          const double q = b0 + x * (b1 + x * b2);
          const double d = std::sqrt(4.0 * b0 * b2 - b1 * b1);
          return std::log(std::fabs(q)) / (2.0 * b2) -
                 (a_c + b1 / (2.0 * b2)) * (2.0 / d) *
                     std::atan((2.0 * b2 * x + b1) / d);
        };
        const double cut = 50.0;
        auto quad = [&](double lo, double hi, int pw) {
          const int steps = 400000;
          const double h = (hi - lo) / steps;
          double acc = 0.0;
          for (int i = 0; i <= steps; ++i) {
            const double x = lo + i * h;
            const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
            acc += w * std::exp(log_density(x)) * std::pow(x, pw);
          }
          return acc * h;
        };
        const double mass = quad(-3000.0, 3000.0, 0);
        for (int pw : {3, 4}) {
          const double want = quad(-cut, cut, pw) / mass;
          double acc = 0.0, acc2 = 0.0;
          for (double v : all) {
            const double t = std::fabs(v) <= cut ? std::pow(v, pw) : 0.0;
            acc += t;
            acc2 += t * t;
          }
          const double est = acc / total;
          const double se = std::sqrt(
              std::max(acc2 / total - est * est, 0.0) / static_cast<double>(total));
          checks.check(std::fabs(est - want) <= 5.0 * se + 1e-6,
                       fmt("pearson(%g,%g) truncated E[x^%d] %.4f within 5 se of "
                           "quadrature %.4f (raw kurtosis estimate %.2f)",
                           skew, kurt, pw, est, want, kurtosis(all)));
        }
      }
    }
  }

  // power ordering on bounded alternatives: SW rejects far more often than
  // the kernel test at the same level
  {
    RandomStream root = rng.substream(0xB0);
    const int trials = 2000;
    std::vector<int> sw_rej(trials, 0), fssd_rej(trials, 0);
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
      RandomStream r = root.substream(t);
      std::vector<double> x(50);
      for (auto& v : x) v = r.uniform();
      sw_rej[t] = shapiro_wilk(x, 0.1).reject;
      FssdConfig cfg;
      cfg.null_sims = 200;
      fssd_rej[t] = fssd_test(x, cfg, 0.1, r).reject;
    });
    long sw_total = 0, fssd_total = 0;
    for (int t = 0; t < trials; ++t) {
      sw_total += sw_rej[static_cast<std::size_t>(t)];
      fssd_total += fssd_rej[static_cast<std::size_t>(t)];
    }
    const double sw_power = static_cast<double>(sw_total) / trials;
    const double fssd_power = static_cast<double>(fssd_total) / trials;
    checks.check(sw_power > fssd_power,
                 fmt("SW power %.3f exceeds FSSD power %.3f on uniforms (n=50, "
                     "alpha=0.1)",
                     sw_power, fssd_power));
  }

  // dataset determinism: regeneration is hash-stable
  {
    GenSpec spec;
    spec.sizes = {10, 30};
    spec.per_class_total = 300;
    spec.master_seed = 31337;
    spec.name = "hash-check";
    const auto h1 = dataset_hash(generate_pearson_style_set(spec));
    const auto h2 = dataset_hash(generate_pearson_style_set(spec));
    checks.check(h1 == h2, "pearson-style generation is hash-stable");
    const auto g1 = dataset_hash(generate_group_set(Group::G2, {10, 20}, 50, 9));
    const auto g2 = dataset_hash(generate_group_set(Group::G2, {10, 20}, 50, 9));
    checks.check(g1 == g2, "group-set generation is hash-stable");
  }

  checks.check(timer.seconds() < 300.0, fmt("runtime %.1f s < 300 s", timer.seconds()));
  return checks.finish(9, timer.seconds());
}

int criterion_10() {
  Timer timer;
  CheckList checks;
  checks.note(
      "excluded from gating: exact per-cell table values from the "
      "reference results (retraining variance, unpublished seeds), real-world "
      "corpora (not bundled; ingestion is covered by unit tests on synthetic "
      "CSVs), and kernel-test columns beyond criterion 6's bound");
  checks.check(true, "exclusions documented");
  return checks.finish(10, timer.seconds());
}

}  // namespace

int main(int argc, char** argv) {
  int criterion = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      criterion = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--work-dir") == 0 && i + 1 < argc) {
      g_work = argv[++i];
    }
  }
  fs::create_directories(g_work);
  try {
    switch (criterion) {
      case 1: return criterion_1();
      case 2: return criterion_2();
      case 3: return criterion_3();
      case 4: return criterion_4();
      case 5: return criterion_5();
      case 6: return criterion_6();
      case 7: return criterion_7();
      case 8: return criterion_8();
      case 9: return criterion_9();
      case 10: return criterion_10();
      default: {
        int failed = 0;
        failed += criterion_1();
        failed += criterion_2();
        failed += criterion_3();
        failed += criterion_4();
        failed += criterion_5();
        failed += criterion_6();
        failed += criterion_7();
        failed += criterion_8();
        failed += criterion_9();
        failed += criterion_10();
        std::printf("acceptance: %d criteria failed\n", failed);
        return failed == 0 ? 0 : 1;
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance aborted: %s\n", e.what());
    return 2;
  }
}
