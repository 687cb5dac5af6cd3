#include "normnet/fssd.hpp"

#include <algorithm>
#include <cmath>

#include "normnet/errors.hpp"
#include "normnet/parallel.hpp"
#include "normnet/sample.hpp"

namespace normnet {

namespace {

double median_pairwise_distance(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> d;
  d.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d.push_back(std::fabs(x[i] - x[j]));
    }
  }
  const std::size_t mid = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid), d.end());
  double m = d[mid];
  if (d.size() % 2 == 0) {
    const double lo = *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid));
    m = 0.5 * (lo + m);
  }
  return m;
}

void check_config(const FssdConfig& cfg) {
  if (cfg.m < 1) throw InvalidParameterError("fssd: m must be >= 1");
  if (!cfg.locations.empty() &&
      cfg.locations.size() != static_cast<std::size_t>(cfg.m)) {
    throw InvalidParameterError("fssd: fixed locations must have length m");
  }
}

}  // namespace

double fssd_statistic(std::span<const double> x, const FssdConfig& cfg,
                      RandomStream& rng) {
  check_config(cfg);
  if (x.size() < 2) throw SampleSizeError("fssd: n must be >= 2");
  const double xbar = mean(x);
  const double s = sample_sd(x);
  if (!(s > 0.0)) throw ConstantSampleError("fssd: sample is constant");
  const double var = s * s;

  double bw = cfg.bandwidth;
  if (!(bw > 0.0)) {
    bw = median_pairwise_distance(x);
    if (!(bw > 0.0)) {
      throw ZeroBandwidthError("fssd: all pairwise differences are zero");
    }
  }
  const double inv_bw2 = 1.0 / (bw * bw);

  std::vector<double> v(static_cast<std::size_t>(cfg.m));
  if (cfg.locations.empty()) {
    for (auto& loc : v) loc = xbar + s * rng.normal();
  } else {
    v = cfg.locations;
  }

  // xi(x, v) = score(x) k(x, v) + dk/dx with score(x) = (xbar - x)/var and
  // dk/dx = -(x - v)/bw^2 * k. The pair sum over Delta collapses columnwise:
  //   sum_{i<j} Delta = (1/m) sum_l ((sum_i Xi_il)^2 - sum_i Xi_il^2) / 2.
  const auto n = static_cast<double>(x.size());
  double acc = 0.0;
  for (double loc : v) {
    double col_sum = 0.0, col_sq = 0.0;
    for (double xi_val : x) {
      const double diff = xi_val - loc;
      const double k = std::exp(-0.5 * diff * diff * inv_bw2);
      const double score = (xbar - xi_val) / var;
      const double xi = score * k - diff * inv_bw2 * k;
      col_sum += xi;
      col_sq += xi * xi;
    }
    acc += 0.5 * (col_sum * col_sum - col_sq);
  }
  const double pair_sum = acc / static_cast<double>(cfg.m);
  return 2.0 / (n * (n - 1.0)) * pair_sum;
}

TestOutcome fssd_test(std::span<const double> x, const FssdConfig& cfg,
                      double alpha, RandomStream& rng) {
  check_config(cfg);
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidProbabilityError("fssd: alpha must lie in (0,1)");
  }
  if (cfg.null_sims < 100) {
    throw InvalidParameterError("fssd: null_sims must be >= 100");
  }
  const double xbar = mean(x);
  const double s = sample_sd(x);
  if (!(s > 0.0)) throw ConstantSampleError("fssd: sample is constant");

  const double observed = fssd_statistic(x, cfg, rng);

  std::vector<double> null_stats(static_cast<std::size_t>(cfg.null_sims));
  auto run_sim = [&](std::size_t i) {
    RandomStream sim_rng = rng.substream(i);
    std::vector<double> sim(x.size());
    for (auto& val : sim) val = xbar + s * sim_rng.normal();
    null_stats[i] = fssd_statistic(sim, cfg, sim_rng);
  };
  if (cfg.parallel_null) {
    parallel_for(null_stats.size(), run_sim);
  } else {
    for (std::size_t i = 0; i < null_stats.size(); ++i) run_sim(i);
  }

  std::size_t ge = 0;
  for (double t : null_stats) {
    if (t >= observed) ++ge;
  }
  const double p = (1.0 + static_cast<double>(ge)) /
                   (1.0 + static_cast<double>(cfg.null_sims));
  TestOutcome o;
  o.method = TestMethod::FSSD;
  o.statistic = observed;
  o.p_value = p;
  o.alpha = alpha;
  o.reject = p < alpha;
  return o;
}

}  // namespace normnet
