#pragma once

#include <cstddef>
#include <span>

namespace normnet {

// Standard normal CDF evaluated through erfc; absolute error below 1e-12
// over the whole real line, which keeps log(Phi) usable deep in the tails.
double normal_cdf(double t);

// Standard normal density.
double normal_pdf(double t);

// Inverse of normal_cdf for p in (0,1). Initial rational guess refined by
// Halley steps against normal_cdf itself, so its accuracy tracks the CDF's.
double normal_quantile(double p);

// Survival function of the chi-squared distribution with 2 degrees of
// freedom: exp(-x/2).
double chi2_sf_2dof(double x);

// Horner evaluation, coefficients in increasing-power order.
double polyval(std::span<const double> coeffs, double x);

}  // namespace normnet
