#pragma once

#include <string>
#include <variant>
#include <vector>

#include "normnet/pearson.hpp"
#include "normnet/rng.hpp"
#include "normnet/sample.hpp"

namespace normnet {

// One-dimensional sampleable laws used for dataset synthesis. Parameter
// conventions (documented in the CLI help as well):
//   Gamma(shape, scale), Weibull(scale, shape), Lognormal(mu, sigma) with
//   mu/sigma on the log scale, Gumbel(location, scale) with CDF
//   exp(-exp(-(x-loc)/scale)).
struct NormalDist {
  double mu = 0.0, sigma = 1.0;
};
struct StudentTDist {
  double dof = 1.0;
};
struct LogisticDist {
  double loc = 0.0, scale = 1.0;
};
struct LaplaceDist {
  double loc = 0.0, scale = 1.0;
};
struct GumbelDist {
  double loc = 0.0, scale = 1.0;
};
struct ExponentialDist {
  double mean = 1.0;
};
struct GammaDist {
  double shape = 1.0, scale = 1.0;
};
struct LognormalDist {
  double mu = 0.0, sigma = 1.0;
};
struct WeibullDist {
  double scale = 1.0, shape = 1.0;
};
struct UniformDist {
  double a = 0.0, b = 1.0;
};
struct BetaDist {
  double alpha = 1.0, beta = 1.0;
};

using DistributionSpec =
    std::variant<NormalDist, StudentTDist, LogisticDist, LaplaceDist, GumbelDist,
                 ExponentialDist, GammaDist, LognormalDist, WeibullDist,
                 UniformDist, BetaDist, PearsonSpec>;

// Validates parameter constraints (scales/shapes > 0, b > a, ...).
void validate(const DistributionSpec& spec);

std::string family_name(const DistributionSpec& spec);
std::vector<double> family_params(const DistributionSpec& spec);

// n independent draws; deterministic given the stream state and spec.
// Pearson specs build a sampler per call; reuse PearsonSampler directly
// when drawing many samples from one spec.
Sample sample(const DistributionSpec& spec, int n, RandomStream& rng);

// Non-normal benchmark groups. G1: heavy-tailed symmetric on R,
// G2: Gumbel family, G3: positive-support skewed, G4: bounded on (0,1).
enum class Group { G1, G2, G3, G4 };

std::string group_name(Group g);
std::vector<DistributionSpec> group_distributions(Group g);

// JSON round trip: {"family": string, "params": [...]}; Pearson specs also
// carry their four target moments.
std::string spec_to_json(const DistributionSpec& spec);
DistributionSpec spec_from_json(const std::string& json_text);

}  // namespace normnet
