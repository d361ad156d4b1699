#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dianet {

double mean(std::span<const double> values);

// Sample standard deviation (n-1 denominator); 0 for n < 2.
double sample_sd(std::span<const double> values);

// Sample covariance (n-1 denominator); 0 for n < 2.
double sample_cov(std::span<const double> a, std::span<const double> b);

// Linear-interpolation quantile at position p*(n-1) of the sorted data.
// `sorted` must be ascending and non-empty; p in [0, 1].
double quantile_sorted(std::span<const double> sorted, double p);

// Convenience overload that copies and sorts.
double quantile(std::span<const double> values, double p);

// Standard normal CDF.
double normal_cdf(double x);

// Two-sided normal tail probability for a z statistic.
double two_sided_p(double z);

}  // namespace dianet
