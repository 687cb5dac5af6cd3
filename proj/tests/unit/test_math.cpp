#include <doctest.h>

#include <cmath>

#include "normnet/errors.hpp"
#include "normnet/math.hpp"

using namespace normnet;

TEST_CASE("normal_cdf basic values") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  // standard 97.5% quantile
  CHECK(std::fabs(normal_cdf(1.959963985) - 0.975) < 1e-9);
  CHECK(normal_cdf(-40.0) >= 0.0);
  CHECK(normal_cdf(40.0) <= 1.0);
}

TEST_CASE("normal_cdf reflection identity") {
  for (double t = 0.0; t <= 8.0; t += 0.37) {
    CHECK(std::fabs(normal_cdf(-t) - (1.0 - normal_cdf(t))) < 1e-12);
  }
}

TEST_CASE("normal_quantile inverts normal_cdf") {
  for (double p : {1e-10, 1e-6, 0.001, 0.025, 0.5, 0.8, 0.975, 0.999, 1 - 1e-9}) {
    const double x = normal_quantile(p);
    CHECK(std::fabs(normal_cdf(x) - p) < 1e-13 + 1e-12 * p);
  }
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)normal_quantile(0.0), InvalidProbabilityError);
  CHECK_THROWS_AS((void)normal_quantile(1.0), InvalidProbabilityError);
}

TEST_CASE("chi2 survival with 2 dof") {
  CHECK(chi2_sf_2dof(0.0) == 1.0);
  CHECK(chi2_sf_2dof(2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("polyval evaluates increasing powers") {
  const double c[3] = {1.0, 2.0, 3.0};
  CHECK(polyval(c, 2.0) == doctest::Approx(1 + 4 + 12).epsilon(1e-15));
}
