#include "normnet/sample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "normnet/errors.hpp"

namespace normnet {

double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_sd(std::span<const double> x) {
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double central_moment(std::span<const double> x, int order) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += std::pow(v - m, order);
  return s / static_cast<double>(x.size());
}

double skewness(std::span<const double> x) {
  require_size(x, 3, "skewness");
  const double m2 = central_moment(x, 2);
  if (m2 <= 0.0) throw ConstantSampleError("skewness: zero variance");
  return central_moment(x, 3) / std::pow(m2, 1.5);
}

double kurtosis(std::span<const double> x) {
  require_size(x, 3, "kurtosis");
  const double m2 = central_moment(x, 2);
  if (m2 <= 0.0) throw ConstantSampleError("kurtosis: zero variance");
  return central_moment(x, 4) / (m2 * m2);
}

double sample_min(std::span<const double> x) {
  return *std::min_element(x.begin(), x.end());
}

double sample_max(std::span<const double> x) {
  return *std::max_element(x.begin(), x.end());
}

double median(std::span<const double> x) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  if (n % 2 == 1) return s[n / 2];
  return 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

Sample standardize(std::span<const double> x) {
  require_size(x, 3, "standardize");
  const double m = mean(x);
  const double s = require_spread(x, "standardize");
  Sample z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - m) / s;
  return z;
}

void require_size(std::span<const double> x, std::size_t min_n, const char* who) {
  if (x.size() < min_n) {
    throw SampleSizeError(std::string(who) + ": sample must have at least " +
                          std::to_string(min_n) + " elements, got " +
                          std::to_string(x.size()));
  }
}

double require_spread(std::span<const double> x, const char* who) {
  const double s = sample_sd(x);
  if (!(s > 0.0)) {
    throw ConstantSampleError(std::string(who) + ": sample is constant");
  }
  return s;
}

}  // namespace normnet
