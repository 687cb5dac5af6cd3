#pragma once

#include <array>
#include <span>
#include <vector>

#include "normnet/sample.hpp"

namespace normnet {

// Fixed-size representation of a variable-size sample: evenly spaced
// empirical quantiles of the standardized sample followed by summary
// statistics of the raw sample. The flattened layout (and the CSV column
// order) is: quantiles..., n, mean, sd, min, max, median.
struct Descriptor {
  std::vector<double> quantiles;
  int n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;

  std::vector<double> flatten() const;
  std::size_t dimension() const { return quantiles.size() + 6; }
};

// Smallest element whose empirical CDF reaches p: min{z_i : F(z_i) >= p}.
// p must lie in (0,1]; p = 1 returns the maximum.
double empirical_quantile(std::span<const double> z, double p);

// Quantile probabilities are q, 2q, ..., capped so the grid ends exactly
// at 1 (ceil(1/q) quantiles in total). Requires n >= 3, sd > 0 and
// 1/q in [1, 10*n].
Descriptor descriptor(std::span<const double> x, double q);

// Fisher z-transform of the correlation between the sample and its
// leave-one-out cube-root statistics h_i (Lin & Mudholkar, 1980).
// Negative cube-root arguments use the real signed root.
double lin_mudholkar(std::span<const double> x);

// Sample-spacings entropy statistic of Vasicek (1976):
//   K_{m,n} = n / (2 m sd(x)) * (prod (x_(i+m) - x_(i-m)))^(1/n)
// with indices clamped to [1, n]; the product is evaluated in log space.
double vasicek(std::span<const double> x, int m);

// Statistic vector [skew, kurt, W, Z_p, K_{3,n}, K_{5,n}, n] consumed by the
// statistic-based classifier. Requires n >= 11 so that K_{5,n} exists.
struct StatVector {
  double skew = 0.0;
  double kurt = 0.0;
  double w = 0.0;
  double zp = 0.0;
  double k3 = 0.0;
  double k5 = 0.0;
  int n = 0;

  std::array<double, 7> flatten() const;
};

StatVector sbnn_features(std::span<const double> x);

}  // namespace normnet
