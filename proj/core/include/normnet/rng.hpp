#pragma once

#include <array>
#include <cstdint>

namespace normnet {

// Deterministic pseudo-random stream (xoshiro256++ seeded via splitmix64).
//
// Streams are splittable: substream(i) derives an independent child stream
// from (this stream's key, i), so parallel generators can hand one stream
// to each work item and get results that do not depend on scheduling.
// Every draw is implemented here rather than through <random> distributions,
// which keeps sequences bit-reproducible across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  // Child stream keyed by (key, index). Children with distinct indices are
  // statistically independent of each other and of the parent.
  RandomStream substream(std::uint64_t index) const;

  std::uint64_t key() const { return key_; }

  std::uint64_t next_u64();

  // Uniform on [0,1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller (second variate cached).
  double normal();
  double normal(double mu, double sigma);

  double exponential(double mean);

  // Marsaglia-Tsang (2000) for shape >= 1; the usual u^(1/shape) boost below.
  double gamma(double shape, double scale);

  double beta(double alpha, double beta);

  double student_t(double dof);

  double logistic(double loc, double scale);
  double laplace(double loc, double scale);

  // CDF exp(-exp(-(x-loc)/scale)).
  double gumbel(double loc, double scale);

  double lognormal(double mu, double sigma);

  // CDF 1 - exp(-(x/scale)^shape).
  double weibull(double scale, double shape);

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t key_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace normnet
