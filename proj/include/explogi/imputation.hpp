#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "explogi/csv.hpp"
#include "explogi/data.hpp"
#include "explogi/distributions.hpp"
#include "explogi/errors.hpp"
#include "explogi/inference.hpp"
#include "explogi/rng.hpp"

namespace explogi {

enum class Origin { observed, imputed };

inline const char* to_string(Origin o) { return o == Origin::observed ? "observed" : "imputed"; }

struct CompletedRecord {
    double value = 0.0;
    double weight = 1.0;
    Origin origin = Origin::observed;
    long draw_id = 0;
};

/// One completed dataset: the observed records, untouched, united with the
/// imputed records (all weight 1) drawn for one parameter combination.
struct CompletedDataset {
    std::vector<CompletedRecord> records;
    ExpLogisticParams params_used;
    double k_used = 1.0;
    std::size_t n_new = 0;
    long draw_id = 0;
};

/// Number of unreported records implied by the reported fraction k:
/// round(n_obs_effective * (1-k)/k), ties to even. For survey-weighted data
/// n_obs_effective is the weight total, since weights are population counts.
inline std::size_t n_new(double n_obs_effective, double k) {
    if (!(k > 0.0) || k > 1.0) throw std::domain_error("n_new: k must be in (0, 1]");
    if (!(n_obs_effective > 0.0)) throw std::domain_error("n_new: n_obs_effective must be > 0");
    const double count = n_obs_effective * (1.0 - k) / k;
    return static_cast<std::size_t>(std::nearbyint(count));
}

/// Share of the population that goes unreported.
inline double missingness_fraction(double k) {
    if (!(k > 0.0) || k > 1.0) throw std::domain_error("missingness_fraction: k must be in (0, 1]");
    return 1.0 - k;
}

/// Completes the sample under one parameter combination: computes k, sizes
/// the missing stratum, and appends that many CCDF-weighted draws with
/// weight 1. The observed records are copied unmodified, in order.
inline CompletedDataset impute_one(const WeightedSample& data, const ExpLogisticParams& p, Rng& rng,
                                   double tol, long draw_id = 0) {
    if (data.empty()) throw std::invalid_argument("impute_one: data must be non-empty");
    CompletedDataset out;
    out.params_used = p;
    out.draw_id = draw_id;
    out.k_used = normalizer_k(p, tol);
    out.n_new = n_new(data.total_weight(), out.k_used);
    out.records.reserve(data.size() + out.n_new);
    for (const auto& r : data.records)
        out.records.push_back({r.value, r.weight, Origin::observed, draw_id});
    for (double x : sample_missing(p, out.n_new, rng))
        out.records.push_back({x, 1.0, Origin::imputed, draw_id});
    return out;
}

namespace detail {

/// m indices evenly spaced over [0, n): floor(i*n/m).
inline std::vector<std::size_t> evenly_spaced_indices(std::size_t n, std::size_t m) {
    std::vector<std::size_t> idx;
    idx.reserve(m);
    for (std::size_t i = 0; i < m; ++i) idx.push_back(i * n / m);
    return idx;
}

}  // namespace detail

/// Multiple imputation: m completed datasets from m evenly-spaced posterior
/// draws. Each replica gets its own generator derived from (seed, draw_id),
/// so replicas are independent and the set is reproducible.
inline std::vector<CompletedDataset> impute_multiple(const WeightedSample& data,
                                                     const PosteriorDraws& draws, std::size_t m,
                                                     std::uint64_t seed, double tol) {
    if (m < 1) throw std::invalid_argument("impute_multiple: m must be >= 1");
    if (draws.size() < m)
        throw std::invalid_argument("impute_multiple: need at least m stored draws (m=" +
                                    std::to_string(m) + ", draws=" + std::to_string(draws.size()) +
                                    ")");
    std::vector<CompletedDataset> out;
    out.reserve(m);
    for (std::size_t idx : detail::evenly_spaced_indices(draws.size(), m)) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(idx)));
        out.push_back(impute_one(data, draws.draws[idx], rng, tol, static_cast<long>(idx)));
    }
    return out;
}

inline constexpr long kAverageDrawId = -1;

/// Single completed dataset at the posterior mean of each constrained
/// parameter (draw_id -1 marks it as the averaged replica).
inline CompletedDataset impute_average(const WeightedSample& data, const PosteriorDraws& draws,
                                       std::uint64_t seed, double tol) {
    if (draws.draws.empty()) throw std::invalid_argument("impute_average: no draws");
    long double lambda = 0.0L, mu = 0.0L, sigma = 0.0L;
    for (const auto& p : draws.draws) {
        lambda += p.lambda;
        mu += p.mu_bias;
        sigma += p.sigma_bias;
    }
    const auto n = static_cast<long double>(draws.draws.size());
    const ExpLogisticParams mean_params{static_cast<double>(lambda / n), static_cast<double>(mu / n),
                                        static_cast<double>(sigma / n)};
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(kAverageDrawId)));
    return impute_one(data, mean_params, rng, tol, kAverageDrawId);
}

inline void write_completed_csv(const std::string& path, const CompletedDataset& ds) {
    auto out = open_output(path);
    out << "value,weight,origin,draw_id\n";
    for (const auto& r : ds.records) {
        out << format_double(r.value) << ',' << format_double(r.weight) << ',' << to_string(r.origin)
            << ',' << r.draw_id << '\n';
    }
    if (!out) throw DataError("failed writing '" + path + "'");
}

}  // namespace explogi
