#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "explogi/data.hpp"
#include "explogi/distributions.hpp"
#include "explogi/imputation.hpp"
#include "explogi/inference.hpp"
#include "explogi/stats.hpp"

namespace explogi {

/// One grid point of one posterior predictive curve: the normalized
/// reported density, the population density and the reporting probability
/// evaluated at x under the selected draw.
struct PpcRow {
    long draw_id = 0;
    double x = 0.0;
    double explogistic_pdf = 0.0;
    double exponential_pdf = 0.0;
    double logistic_cdf = 0.0;
};

/// Plot-ready posterior predictive curves for n_curves evenly-spaced draws.
inline std::vector<PpcRow> ppc_curves(const PosteriorDraws& draws, std::size_t n_curves,
                                      const std::vector<double>& x_grid, double tol) {
    if (n_curves < 1) throw std::invalid_argument("ppc_curves: n_curves must be >= 1");
    if (n_curves > draws.size())
        throw std::invalid_argument("ppc_curves: n_curves exceeds the number of stored draws");
    for (double x : x_grid)
        if (!(x >= 0.0)) throw std::domain_error("ppc_curves: grid points must be >= 0");

    std::vector<PpcRow> rows;
    rows.reserve(n_curves * x_grid.size());
    for (std::size_t idx : detail::evenly_spaced_indices(draws.size(), n_curves)) {
        const ExpLogisticParams& p = draws.draws[idx];
        const double log_k = std::log(normalizer_k(p, tol));
        for (double x : x_grid) {
            PpcRow row;
            row.draw_id = static_cast<long>(idx);
            row.x = x;
            row.explogistic_pdf = std::exp(explogistic_unnorm_logpdf(x, p) - log_k);
            row.exponential_pdf = std::exp(exp_logpdf(x, p.lambda));
            row.logistic_cdf = logistic_cdf(x, p.mu_bias, p.sigma_bias);
            rows.push_back(row);
        }
    }
    return rows;
}

/// Default curve grid: 512 points from 0 to the 99.9% quantile of the
/// exponential at the posterior median rate.
inline std::vector<double> default_ppc_grid(const PosteriorDraws& draws, std::size_t n_points = 512,
                                            double upper_at_least = 0.0) {
    if (draws.draws.empty()) throw std::invalid_argument("default_ppc_grid: no draws");
    const double lambda_median = quantile(draws.column(0), 0.5);
    const double upper = std::max(-std::log(1e-3) / lambda_median, upper_at_least);
    std::vector<double> grid;
    grid.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i)
        grid.push_back(upper * static_cast<double>(i) / static_cast<double>(n_points - 1));
    return grid;
}

struct HistogramBin {
    double left = 0.0;
    double right = 0.0;
    double weighted_density = 0.0;
};

/// Weight-summed histogram normalized to integrate to 1; bins are
/// [i*w, (i+1)*w) anchored at zero. Rescaling all weights by a common
/// factor leaves the result unchanged.
inline std::vector<HistogramBin> weighted_histogram(const WeightedSample& data, double bin_width) {
    if (!(bin_width > 0.0)) throw std::domain_error("weighted_histogram: bin_width must be > 0");
    if (data.empty()) throw std::invalid_argument("weighted_histogram: data must be non-empty");

    std::size_t n_bins = 0;
    for (const auto& r : data.records)
        n_bins = std::max(n_bins, static_cast<std::size_t>(r.value / bin_width) + 1);
    std::vector<long double> mass(n_bins, 0.0L);
    long double total = 0.0L;
    for (const auto& r : data.records) {
        mass[static_cast<std::size_t>(r.value / bin_width)] += r.weight;
        total += r.weight;
    }

    std::vector<HistogramBin> bins(n_bins);
    for (std::size_t i = 0; i < n_bins; ++i) {
        bins[i].left = static_cast<double>(i) * bin_width;
        bins[i].right = static_cast<double>(i + 1) * bin_width;
        bins[i].weighted_density = static_cast<double>(mass[i] / (total * bin_width));
    }
    return bins;
}

/// Kolmogorov-Smirnov statistic of a sample against Exp(lambda): the
/// sup-distance between the (right-continuous) empirical CDF and the
/// exponential CDF, always in [0, 1].
inline double ks_statistic(std::vector<double> sample, double lambda) {
    if (sample.empty()) throw std::invalid_argument("ks_statistic: sample must be non-empty");
    if (!(lambda > 0.0)) throw std::domain_error("ks_statistic: lambda must be > 0");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = -std::expm1(-lambda * sample[i]);
        const double upper = (static_cast<double>(i) + 1.0) / n - f;
        const double lower = f - static_cast<double>(i) / n;
        d = std::max(d, std::max(upper, lower));
    }
    return std::min(d, 1.0);
}

}  // namespace explogi
