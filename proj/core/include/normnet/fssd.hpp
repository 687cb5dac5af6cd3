#pragma once

#include <span>
#include <vector>

#include "normnet/rng.hpp"
#include "normnet/stat_tests.hpp"

namespace normnet {

// Finite-set Stein discrepancy against the Gaussian fitted to the sample
// (mean and sd estimated from the data).
struct FssdConfig {
  int m = 10;              // number of witness locations
  double bandwidth = 0.0;  // Gaussian kernel bandwidth; <= 0 => median of
                           // pairwise absolute differences
  int null_sims = 200;     // parametric-bootstrap draws for the p-value
  bool parallel_null = false;
  std::vector<double> locations;  // fixed witness locations (tests/debugging);
                                  // empty => drawn from the fitted Gaussian
};

// U-statistic estimate of FSSD^2. Witness locations are drawn from
// N(mean, sd^2) using rng; the kernel is exp(-(x-v)^2 / (2 bw^2)) and the
// fitted score is (mean - x)/sd^2. Requires n >= 2.
double fssd_statistic(std::span<const double> x, const FssdConfig& cfg,
                      RandomStream& rng);

// p-value by parametric bootstrap: null_sims samples of the same size are
// drawn from the fitted Gaussian and the whole pipeline (refit, redraw
// locations, recompute bandwidth) is repeated per simulation;
// p = (1 + #{sim >= observed}) / (1 + null_sims). The statistic's null
// distribution does not depend on the fitted location/scale, so the
// bootstrap p-value is uniform under the null up to its 1/(null_sims+1)
// discreteness.
TestOutcome fssd_test(std::span<const double> x, const FssdConfig& cfg,
                      double alpha, RandomStream& rng);

}  // namespace normnet
