#pragma once

#include <memory>
#include <string>
#include <vector>

#include "normnet/rng.hpp"

namespace normnet {

// Resolved family of a Pearson-system member. Types are the classical ones;
// II is the symmetric special case of I and shares its sampler.
enum class PearsonType { Gaussian, I, II, III, IV, V, VI, VII };

std::string pearson_type_name(PearsonType t);

// A Pearson-system distribution pinned down by its first four moments.
// The density f solves f'(x)/f(x) = (x - a) / (b0 + b1 x + b2 x^2), with
// the coefficients determined by the central moments (a = b1 always).
struct PearsonSpec {
  double mean = 0.0;
  double sd = 1.0;
  double skew = 0.0;  // sqrt(b1) in moment notation
  double kurt = 3.0;  // b2 in moment notation
  double a = 0.0;
  double b0 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  PearsonType type = PearsonType::Gaussian;
};

// True iff some distribution has the given skewness and kurtosis
// (kurt > skew^2 + 1).
bool pearson_feasible(double skew, double kurt);

// Builds the spec from (mean, sd, skew, kurt). Throws InfeasibleMomentsError
// when pearson_feasible fails and DegenerateDenominatorError when the common
// denominator C = 10 m4 m2 - 12 m3^2 - 18 m2^3 vanishes; never divides by it.
PearsonSpec pearson_from_moments(double mean, double sd, double skew, double kurt);

// Draws variates matching a PearsonSpec. Types with a closed-form equivalent
// delegate to it (I/II -> scaled Beta, III -> Gamma, V -> inverse Gamma,
// VI -> Beta prime, VII -> rescaled Student t); Type IV has no classical
// equivalent and is sampled by inverting a numerically integrated CDF with
// per-draw refinement to ~1e-12 in probability.
//
// Construction can be costly for Type IV (it builds the inversion table),
// draw() is cheap and const, so one sampler can serve many threads as long
// as each thread supplies its own RandomStream.
class PearsonSampler {
 public:
  explicit PearsonSampler(const PearsonSpec& spec);
  ~PearsonSampler();
  PearsonSampler(PearsonSampler&&) noexcept;
  PearsonSampler& operator=(PearsonSampler&&) noexcept;

  double draw(RandomStream& rng) const;
  PearsonType type() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace normnet
