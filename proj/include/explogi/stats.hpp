#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace explogi {

/// Quantile with linear interpolation between order statistics
/// (h = (n-1)p + 1 on 1-based ranks; R's default "type 7" rule).
/// Input must be sorted ascending.
inline double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile_sorted: empty input");
    if (p <= 0.0) return sorted.front();
    if (p >= 1.0) return sorted.back();
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const std::size_t i = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(i);
    if (i + 1 >= sorted.size()) return sorted.back();
    return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

inline double quantile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    return quantile_sorted(values, p);
}

inline double mean(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mean: empty input");
    long double s = 0.0L;
    for (double v : values) s += v;
    return static_cast<double>(s / static_cast<long double>(values.size()));
}

/// Unbiased sample variance (n - 1 denominator).
inline double variance(std::span<const double> values) {
    if (values.size() < 2) throw std::invalid_argument("variance: need at least 2 values");
    const double m = mean(values);
    long double s = 0.0L;
    for (double v : values) {
        const long double d = static_cast<long double>(v) - m;
        s += d * d;
    }
    return static_cast<double>(s / static_cast<long double>(values.size() - 1));
}

inline double stddev(std::span<const double> values) { return std::sqrt(variance(values)); }

}  // namespace explogi
