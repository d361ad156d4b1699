#include "dianet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dianet {

double mean(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mean: empty input");
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

double sample_cov(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("sample_cov: size mismatch");
    const std::size_t n = a.size();
    if (n < 2) return 0.0;
    const double ma = mean(a);
    const double mb = mean(b);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (a[i] - ma) * (b[i] - mb);
    return s / static_cast<double>(n - 1);
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile: empty input");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile: p outside [0,1]");
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = p * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo >= n - 1) return sorted[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double quantile(std::span<const double> values, double p) {
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    return quantile_sorted(v, p);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double two_sided_p(double z) {
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

}  // namespace dianet
