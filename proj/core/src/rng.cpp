#include "normnet/rng.hpp"

#include <cmath>

#include "normnet/errors.hpp"

namespace normnet {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_key(std::uint64_t key, std::uint64_t index) {
  std::uint64_t x = key ^ (0x9E3779B97F4A7C15ull * (index + 1));
  std::uint64_t z = splitmix64(x);
  return z ^ splitmix64(x);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : key_(seed) {
  std::uint64_t x = seed;
  for (auto& w : state_) w = splitmix64(x);
}

RandomStream RandomStream::substream(std::uint64_t index) const {
  return RandomStream(mix_key(key_, index));
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double RandomStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = 1.0 - uniform();  // (0,1], keeps log finite
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  cached_normal_ = r * std::sin(kTwoPi * u2);
  has_cached_normal_ = true;
  return r * std::cos(kTwoPi * u2);
}

double RandomStream::normal(double mu, double sigma) {
  return mu + sigma * normal();
}

double RandomStream::exponential(double mean) {
  if (mean <= 0.0) throw InvalidParameterError("exponential: mean must be > 0");
  return -mean * std::log(1.0 - uniform());
}

double RandomStream::gamma(double shape, double scale) {
  if (shape <= 0.0 || scale <= 0.0) {
    throw InvalidParameterError("gamma: shape and scale must be > 0");
  }
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0, 1.0);
    const double u = 1.0 - uniform();
    return scale * g * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = 1.0 - uniform();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return scale * d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return scale * d * v;
    }
  }
}

double RandomStream::beta(double alpha, double beta) {
  if (alpha <= 0.0 || beta <= 0.0) {
    throw InvalidParameterError("beta: both shapes must be > 0");
  }
  const double x = gamma(alpha, 1.0);
  const double y = gamma(beta, 1.0);
  return x / (x + y);
}

double RandomStream::student_t(double dof) {
  if (dof <= 0.0) throw InvalidParameterError("student_t: dof must be > 0");
  const double z = normal();
  const double chi2 = gamma(dof / 2.0, 2.0);
  return z / std::sqrt(chi2 / dof);
}

double RandomStream::logistic(double loc, double scale) {
  if (scale <= 0.0) throw InvalidParameterError("logistic: scale must be > 0");
  double u;
  do {
    u = uniform();
  } while (u <= 0.0);
  return loc + scale * std::log(u / (1.0 - u));
}

double RandomStream::laplace(double loc, double scale) {
  if (scale <= 0.0) throw InvalidParameterError("laplace: scale must be > 0");
  double u;
  do {
    u = uniform();
  } while (u <= 0.0);
  if (u < 0.5) return loc + scale * std::log(2.0 * u);
  return loc - scale * std::log(2.0 * (1.0 - u));
}

double RandomStream::gumbel(double loc, double scale) {
  if (scale <= 0.0) throw InvalidParameterError("gumbel: scale must be > 0");
  const double u = 1.0 - uniform();  // (0,1]
  return loc - scale * std::log(-std::log(u));
}

double RandomStream::lognormal(double mu, double sigma) {
  if (sigma <= 0.0) throw InvalidParameterError("lognormal: sigma must be > 0");
  return std::exp(mu + sigma * normal());
}

double RandomStream::weibull(double scale, double shape) {
  if (scale <= 0.0 || shape <= 0.0) {
    throw InvalidParameterError("weibull: scale and shape must be > 0");
  }
  const double u = 1.0 - uniform();
  return scale * std::pow(-std::log(u), 1.0 / shape);
}

}  // namespace normnet
