#include "normnet/distributions.hpp"

#include <nlohmann/json.hpp>

#include "normnet/errors.hpp"

namespace normnet {

namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) {
    throw InvalidParameterError(std::string(what) + " must be > 0");
  }
}

}  // namespace

void validate(const DistributionSpec& spec) {
  std::visit(
      overloaded{
          [](const NormalDist& d) { require_positive(d.sigma, "normal sigma"); },
          [](const StudentTDist& d) { require_positive(d.dof, "student-t dof"); },
          [](const LogisticDist& d) { require_positive(d.scale, "logistic scale"); },
          [](const LaplaceDist& d) { require_positive(d.scale, "laplace scale"); },
          [](const GumbelDist& d) { require_positive(d.scale, "gumbel scale"); },
          [](const ExponentialDist& d) { require_positive(d.mean, "exponential mean"); },
          [](const GammaDist& d) {
            require_positive(d.shape, "gamma shape");
            require_positive(d.scale, "gamma scale");
          },
          [](const LognormalDist& d) { require_positive(d.sigma, "lognormal sigma"); },
          [](const WeibullDist& d) {
            require_positive(d.scale, "weibull scale");
            require_positive(d.shape, "weibull shape");
          },
          [](const UniformDist& d) {
            if (!(d.b > d.a)) throw InvalidParameterError("uniform requires b > a");
          },
          [](const BetaDist& d) {
            require_positive(d.alpha, "beta alpha");
            require_positive(d.beta, "beta beta");
          },
          [](const PearsonSpec& d) {
            require_positive(d.sd, "pearson sd");
            if (!pearson_feasible(d.skew, d.kurt)) {
              throw InfeasibleMomentsError("pearson moments infeasible");
            }
          },
      },
      spec);
}

std::string family_name(const DistributionSpec& spec) {
  return std::visit(
      overloaded{
          [](const NormalDist&) { return std::string("normal"); },
          [](const StudentTDist&) { return std::string("student_t"); },
          [](const LogisticDist&) { return std::string("logistic"); },
          [](const LaplaceDist&) { return std::string("laplace"); },
          [](const GumbelDist&) { return std::string("gumbel"); },
          [](const ExponentialDist&) { return std::string("exponential"); },
          [](const GammaDist&) { return std::string("gamma"); },
          [](const LognormalDist&) { return std::string("lognormal"); },
          [](const WeibullDist&) { return std::string("weibull"); },
          [](const UniformDist&) { return std::string("uniform"); },
          [](const BetaDist&) { return std::string("beta"); },
          [](const PearsonSpec&) { return std::string("pearson"); },
      },
      spec);
}

std::vector<double> family_params(const DistributionSpec& spec) {
  return std::visit(
      overloaded{
          [](const NormalDist& d) { return std::vector<double>{d.mu, d.sigma}; },
          [](const StudentTDist& d) { return std::vector<double>{d.dof}; },
          [](const LogisticDist& d) { return std::vector<double>{d.loc, d.scale}; },
          [](const LaplaceDist& d) { return std::vector<double>{d.loc, d.scale}; },
          [](const GumbelDist& d) { return std::vector<double>{d.loc, d.scale}; },
          [](const ExponentialDist& d) { return std::vector<double>{d.mean}; },
          [](const GammaDist& d) { return std::vector<double>{d.shape, d.scale}; },
          [](const LognormalDist& d) { return std::vector<double>{d.mu, d.sigma}; },
          [](const WeibullDist& d) { return std::vector<double>{d.scale, d.shape}; },
          [](const UniformDist& d) { return std::vector<double>{d.a, d.b}; },
          [](const BetaDist& d) { return std::vector<double>{d.alpha, d.beta}; },
          [](const PearsonSpec& d) {
            return std::vector<double>{d.mean, d.sd, d.skew, d.kurt};
          },
      },
      spec);
}

Sample sample(const DistributionSpec& spec, int n, RandomStream& rng) {
  if (n < 1) throw InvalidParameterError("sample: n must be >= 1");
  validate(spec);
  Sample out(static_cast<std::size_t>(n));
  std::visit(
      overloaded{
          [&](const NormalDist& d) {
            for (auto& v : out) v = rng.normal(d.mu, d.sigma);
          },
          [&](const StudentTDist& d) {
            for (auto& v : out) v = rng.student_t(d.dof);
          },
          [&](const LogisticDist& d) {
            for (auto& v : out) v = rng.logistic(d.loc, d.scale);
          },
          [&](const LaplaceDist& d) {
            for (auto& v : out) v = rng.laplace(d.loc, d.scale);
          },
          [&](const GumbelDist& d) {
            for (auto& v : out) v = rng.gumbel(d.loc, d.scale);
          },
          [&](const ExponentialDist& d) {
            for (auto& v : out) v = rng.exponential(d.mean);
          },
          [&](const GammaDist& d) {
            for (auto& v : out) v = rng.gamma(d.shape, d.scale);
          },
          [&](const LognormalDist& d) {
            for (auto& v : out) v = rng.lognormal(d.mu, d.sigma);
          },
          [&](const WeibullDist& d) {
            for (auto& v : out) v = rng.weibull(d.scale, d.shape);
          },
          [&](const UniformDist& d) {
            for (auto& v : out) v = rng.uniform(d.a, d.b);
          },
          [&](const BetaDist& d) {
            for (auto& v : out) v = rng.beta(d.alpha, d.beta);
          },
          [&](const PearsonSpec& d) {
            PearsonSampler sampler(d);
            for (auto& v : out) v = sampler.draw(rng);
          },
      },
      spec);
  return out;
}

std::string group_name(Group g) {
  switch (g) {
    case Group::G1: return "G1";
    case Group::G2: return "G2";
    case Group::G3: return "G3";
    case Group::G4: return "G4";
  }
  return "?";
}

std::vector<DistributionSpec> group_distributions(Group g) {
  switch (g) {
    case Group::G1:
      return {StudentTDist{1.0}, StudentTDist{3.0}, LogisticDist{0.0, 1.0},
              LaplaceDist{0.0, 1.0}};
    case Group::G2:
      return {GumbelDist{0.0, 1.0}, GumbelDist{0.0, 2.0}, GumbelDist{0.0, 0.5}};
    case Group::G3:
      return {ExponentialDist{1.0},     GammaDist{1.0, 2.0},
              GammaDist{1.0, 0.5},      LognormalDist{0.0, 1.0},
              LognormalDist{0.0, 2.0},  LognormalDist{0.0, 0.5},
              WeibullDist{1.0, 0.5},    WeibullDist{1.0, 2.0}};
    case Group::G4:
      return {UniformDist{0.0, 1.0},  BetaDist{2.0, 2.0}, BetaDist{0.5, 0.5},
              BetaDist{3.0, 1.5},     BetaDist{2.0, 1.0}};
  }
  return {};
}

std::string spec_to_json(const DistributionSpec& spec) {
  json j;
  j["family"] = family_name(spec);
  j["params"] = family_params(spec);
  if (const auto* p = std::get_if<PearsonSpec>(&spec)) {
    j["moments"] = {p->mean, p->sd, p->skew, p->kurt};
  }
  return j.dump();
}

DistributionSpec spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("spec_from_json: ") + e.what());
  }
  const std::string family = j.at("family").get<std::string>();
  const std::vector<double> p = j.at("params").get<std::vector<double>>();
  auto need = [&](std::size_t k) {
    if (p.size() != k) {
      throw IoError("spec_from_json: wrong parameter count for " + family);
    }
  };
  if (family == "normal") {
    need(2);
    return NormalDist{p[0], p[1]};
  }
  if (family == "student_t") {
    need(1);
    return StudentTDist{p[0]};
  }
  if (family == "logistic") {
    need(2);
    return LogisticDist{p[0], p[1]};
  }
  if (family == "laplace") {
    need(2);
    return LaplaceDist{p[0], p[1]};
  }
  if (family == "gumbel") {
    need(2);
    return GumbelDist{p[0], p[1]};
  }
  if (family == "exponential") {
    need(1);
    return ExponentialDist{p[0]};
  }
  if (family == "gamma") {
    need(2);
    return GammaDist{p[0], p[1]};
  }
  if (family == "lognormal") {
    need(2);
    return LognormalDist{p[0], p[1]};
  }
  if (family == "weibull") {
    need(2);
    return WeibullDist{p[0], p[1]};
  }
  if (family == "uniform") {
    need(2);
    return UniformDist{p[0], p[1]};
  }
  if (family == "beta") {
    need(2);
    return BetaDist{p[0], p[1]};
  }
  if (family == "pearson") {
    need(4);
    return pearson_from_moments(p[0], p[1], p[2], p[3]);
  }
  throw IoError("spec_from_json: unknown family " + family);
}

}  // namespace normnet
