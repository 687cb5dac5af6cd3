#include "normnet/features.hpp"

#include <algorithm>
#include <cmath>

#include "normnet/errors.hpp"
#include "normnet/stat_tests.hpp"

namespace normnet {

std::vector<double> Descriptor::flatten() const {
  std::vector<double> out;
  out.reserve(dimension());
  out.insert(out.end(), quantiles.begin(), quantiles.end());
  out.push_back(static_cast<double>(n));
  out.push_back(mean);
  out.push_back(sd);
  out.push_back(min);
  out.push_back(max);
  out.push_back(median);
  return out;
}

double empirical_quantile(std::span<const double> z, double p) {
  if (z.empty()) throw SampleSizeError("empirical_quantile: empty sample");
  if (!(p > 0.0 && p <= 1.0)) {
    throw InvalidProbabilityError("empirical_quantile: p must lie in (0,1]");
  }
  std::vector<double> s(z.begin(), z.end());
  std::sort(s.begin(), s.end());
  const auto n = static_cast<double>(s.size());
  // F(z_(k)) = k/n >= p  <=>  k >= ceil(n p); the epsilon absorbs cases
  // where n*p representable just above an exact integer.
  auto k = static_cast<std::size_t>(std::ceil(n * p - 1e-9));
  k = std::min(std::max<std::size_t>(k, 1), s.size());
  return s[k - 1];
}

Descriptor descriptor(std::span<const double> x, double q) {
  require_size(x, 3, "descriptor");
  if (!(q > 0.0 && q <= 1.0)) {
    throw InvalidProbabilityError("descriptor: q must lie in (0,1]");
  }
  const double inv_q = 1.0 / q;
  if (inv_q > 10.0 * static_cast<double>(x.size())) {
    throw InvalidProbabilityError("descriptor: quantile grid too fine for n");
  }
  Descriptor d;
  d.n = static_cast<int>(x.size());
  d.mean = normnet::mean(x);
  d.sd = require_spread(x, "descriptor");
  d.min = sample_min(x);
  d.max = sample_max(x);
  d.median = normnet::median(x);

  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - d.mean) / d.sd;
  std::sort(z.begin(), z.end());

  const auto m = static_cast<int>(std::ceil(inv_q - 1e-9));
  d.quantiles.reserve(static_cast<std::size_t>(m));
  const auto n = static_cast<double>(z.size());
  for (int j = 1; j <= m; ++j) {
    const double p = j == m ? 1.0 : j * q;
    auto k = static_cast<std::size_t>(std::ceil(n * p - 1e-9));
    k = std::min(std::max<std::size_t>(k, 1), z.size());
    d.quantiles.push_back(z[k - 1]);
  }
  return d;
}

namespace {

double signed_cbrt(double t) { return std::cbrt(t); }

}  // namespace

double lin_mudholkar(std::span<const double> x) {
  require_size(x, 4, "lin_mudholkar");
  require_spread(x, "lin_mudholkar");
  const auto n = static_cast<double>(x.size());
  double sum = 0.0, sum_sq = 0.0;
  for (double v : x) {
    sum += v;
    sum_sq += v * v;
  }
  std::vector<double> h(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s1 = sum - x[i];
    const double s2 = sum_sq - x[i] * x[i];
    h[i] = signed_cbrt((s2 - s1 * s1 / (n - 1.0)) / n);
  }
  const double xbar = sum / n;
  double hbar = 0.0;
  for (double v : h) hbar += v;
  hbar /= n;

  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - xbar;
    const double dh = h[i] - hbar;
    sxy += dx * dh;
    sxx += dx * dx;
    syy += dh * dh;
  }
  if (!(sxx > 0.0 && syy > 0.0)) {
    throw DegenerateCorrelationError("lin_mudholkar: zero variance in correlation");
  }
  double r = sxy / std::sqrt(sxx * syy);
  r = std::min(std::max(r, -1.0 + 1e-15), 1.0 - 1e-15);
  return 0.5 * std::log((1.0 + r) / (1.0 - r));
}

double vasicek(std::span<const double> x, int m) {
  require_size(x, 3, "vasicek");
  const auto n = static_cast<int>(x.size());
  if (m < 1 || 2 * m >= n) {
    throw InvalidWindowError("vasicek: window m must satisfy 1 <= m < n/2");
  }
  const double s = require_spread(x, "vasicek");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  auto at = [&](int i) {
    return sorted[static_cast<std::size_t>(std::clamp(i, 0, n - 1))];
  };
  double log_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double spacing = at(i + m) - at(i - m);
    if (!(spacing > 0.0)) {
      throw ZeroSpacingError("vasicek: zero spacing in window (ties)");
    }
    log_sum += std::log(spacing);
  }
  return static_cast<double>(n) / (2.0 * m * s) *
         std::exp(log_sum / static_cast<double>(n));
}

std::array<double, 7> StatVector::flatten() const {
  return {skew, kurt, w, zp, k3, k5, static_cast<double>(n)};
}

StatVector sbnn_features(std::span<const double> x) {
  require_size(x, 11, "sbnn_features");
  StatVector v;
  v.n = static_cast<int>(x.size());
  v.skew = skewness(x);
  v.kurt = kurtosis(x);
  v.w = shapiro_wilk_statistic(x);
  v.zp = lin_mudholkar(x);
  v.k3 = vasicek(x, 3);
  v.k5 = vasicek(x, 5);
  return v;
}

}  // namespace normnet
