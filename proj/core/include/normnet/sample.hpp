#pragma once

#include <span>
#include <vector>

namespace normnet {

// A sample is an ordered list of real observations. Operations below that
// standardize or compute standardized moments require n >= 3 and a strictly
// positive standard deviation.
using Sample = std::vector<double>;

double mean(std::span<const double> x);

// Unbiased (n-1 denominator) standard deviation.
double sample_sd(std::span<const double> x);

// Central moment m_u = (1/n) sum (x_i - mean)^u.
double central_moment(std::span<const double> x, int order);

// sqrt(b1) = m3 / m2^(3/2), no bias correction.
double skewness(std::span<const double> x);

// b2 = m4 / m2^2, no bias correction.
double kurtosis(std::span<const double> x);

double sample_min(std::span<const double> x);
double sample_max(std::span<const double> x);
double median(std::span<const double> x);

// z_i = (x_i - mean) / sd, result has mean 0 and sd 1 up to rounding.
// Throws ConstantSampleError when sd == 0, SampleSizeError when n < 3.
Sample standardize(std::span<const double> x);

// Shared precondition checks.
void require_size(std::span<const double> x, std::size_t min_n, const char* who);
double require_spread(std::span<const double> x, const char* who);  // returns sd

}  // namespace normnet
