#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "explogi/csv.hpp"
#include "explogi/data.hpp"
#include "explogi/distributions.hpp"
#include "explogi/errors.hpp"
#include "explogi/optim.hpp"
#include "explogi/rng.hpp"
#include "explogi/stats.hpp"

namespace explogi {

/// Parameters on the unconstrained sampling scale. The links are
/// (log, identity, log): the exponential mean mu = 1/lambda = exp(alpha),
/// so lambda = exp(-alpha); sigma_bias = exp(log_sigma_bias). The mean is
/// never stored separately -- consumers derive it as 1/lambda, which keeps
/// the reciprocal relation exact for every draw.
struct UnconstrainedParams {
    double alpha = 0.0;
    double mu_bias = 0.0;
    double log_sigma_bias = 0.0;

    ExpLogisticParams constrained() const {
        return ExpLogisticParams{std::exp(-alpha), mu_bias, std::exp(log_sigma_bias)};
    }

    static UnconstrainedParams from_constrained(const ExpLogisticParams& p) {
        p.validate();
        return UnconstrainedParams{-std::log(p.lambda), p.mu_bias, std::log(p.sigma_bias)};
    }
};

/// Mean of the population exponential implied by the fitted rate.
inline double exponential_mean(const ExpLogisticParams& p) { return 1.0 / p.lambda; }

struct NormalPrior {
    double location = 0.0;
    double scale = 1.0;

    double logpdf(double x) const {
        const double z = (x - location) / scale;
        return -std::log(scale) - 0.5 * std::log(2.0 * 3.14159265358979323846) - 0.5 * z * z;
    }
};

/// Independent normal priors on (alpha, mu_bias, log_sigma_bias).
struct PriorSpec {
    NormalPrior alpha{0.0, 5.0};
    NormalPrior mu_bias{0.0, 5.0};
    NormalPrior log_sigma_bias{0.0, 1.0};

    /// the CLI's "listing6" preset: N(0,5), N(0,5), N(0,1) on the link scale
    static PriorSpec defaults() { return PriorSpec{}; }

    /// the CLI's "eq4" preset: N(0,10) on all three link-scale parameters
    static PriorSpec wide() {
        return PriorSpec{{0.0, 10.0}, {0.0, 10.0}, {0.0, 10.0}};
    }

    void validate() const {
        if (!(alpha.scale > 0.0) || !(mu_bias.scale > 0.0) || !(log_sigma_bias.scale > 0.0))
            throw std::domain_error("PriorSpec: all scales must be > 0");
    }
};

inline double log_prior(const UnconstrainedParams& u, const PriorSpec& prior) {
    prior.validate();
    return prior.alpha.logpdf(u.alpha) + prior.mu_bias.logpdf(u.mu_bias) +
           prior.log_sigma_bias.logpdf(u.log_sigma_bias);
}

namespace detail {

// Data-dependent sums are accumulated in long double so that an integer
// weight w on one record and the record physically repeated w times give the
// same log likelihood to well below 1e-12.
struct LikelihoodCache {
    const WeightedSample* data;
    long double total_weight = 0.0L;
    long double weighted_sum_x = 0.0L;

    explicit LikelihoodCache(const WeightedSample& d) : data(&d) {
        d.validate();
        for (const auto& r : d.records) {
            total_weight += static_cast<long double>(r.weight);
            weighted_sum_x += static_cast<long double>(r.weight) * static_cast<long double>(r.value);
        }
    }

    double log_likelihood(const UnconstrainedParams& u, double tol) const {
        const ExpLogisticParams p = u.constrained();
        p.validate();
        const double k = normalizer_k(p, tol);
        long double s = total_weight * static_cast<long double>(std::log(p.lambda)) -
                        static_cast<long double>(p.lambda) * weighted_sum_x -
                        total_weight * static_cast<long double>(std::log(k));
        for (const auto& r : data->records) {
            s += static_cast<long double>(r.weight) *
                 static_cast<long double>(logistic_logcdf(r.value, p.mu_bias, p.sigma_bias));
        }
        return static_cast<double>(s);
    }
};

}  // namespace detail

/// Weighted log likelihood: sum over records of w_i * logpdf(x_i) under the
/// normalized exponential-logistic density. The normalizing constant is
/// integrated once per call and shared by all records.
inline double log_likelihood(const WeightedSample& data, const UnconstrainedParams& u, double tol) {
    if (data.empty()) throw std::invalid_argument("log_likelihood: data must be non-empty");
    return detail::LikelihoodCache(data).log_likelihood(u, tol);
}

inline double log_posterior(const WeightedSample& data, const UnconstrainedParams& u,
                            const PriorSpec& prior, double tol) {
    return log_prior(u, prior) + log_likelihood(data, u, tol);
}

namespace detail {

// Log posterior as a function of the free coordinate vector. Numerically
// unevaluable points (overflowed constrained parameters, normalizer
// underflow) score -inf so optimizers and samplers step away from them;
// genuine quadrature non-convergence still propagates as an error.
struct PosteriorObjective {
    LikelihoodCache lik;
    PriorSpec prior;
    double tol;
    std::optional<std::array<double, 2>> fix_bias;  // (mu_bias, sigma_bias), constrained scale

    PosteriorObjective(const WeightedSample& data, const PriorSpec& pr, double tol_,
                       std::optional<std::array<double, 2>> fb)
        : lik(data), prior(pr), tol(tol_), fix_bias(fb) {
        prior.validate();
        if (fix_bias && !((*fix_bias)[1] > 0.0))
            throw std::domain_error("fix_bias: sigma_bias must be > 0");
    }

    std::size_t dim() const { return fix_bias ? 1 : 3; }

    UnconstrainedParams unpack(const std::vector<double>& v) const {
        if (fix_bias) return UnconstrainedParams{v[0], (*fix_bias)[0], std::log((*fix_bias)[1])};
        return UnconstrainedParams{v[0], v[1], v[2]};
    }

    std::vector<double> pack(const UnconstrainedParams& u) const {
        if (fix_bias) return {u.alpha};
        return {u.alpha, u.mu_bias, u.log_sigma_bias};
    }

    double operator()(const std::vector<double>& v) const {
        const UnconstrainedParams u = unpack(v);
        const ExpLogisticParams p = u.constrained();
        if (!p.valid()) return -std::numeric_limits<double>::infinity();
        double lp = log_prior(u, prior);
        try {
            lp += lik.log_likelihood(u, tol);
        } catch (const NormalizerUnderflow&) {
            return -std::numeric_limits<double>::infinity();
        }
        return lp;
    }
};

}  // namespace detail

struct MapResult {
    UnconstrainedParams params;
    double log_posterior = 0.0;
    bool converged = false;
    int iterations = 0;
};

namespace detail {

inline MapResult run_map(const PosteriorObjective& obj, const std::vector<double>& init) {
    auto negated = [&obj](const std::vector<double>& v) { return -obj(v); };
    NelderMeadOptions opt;  // diameter 1e-6, 2000 iterations
    const NelderMeadResult r = nelder_mead_minimize(negated, init, opt);
    return MapResult{obj.unpack(r.x), -r.fval, r.converged, r.iterations};
}

}  // namespace detail

/// Data-driven starting point: alpha from the sample mean (the exponential
/// mean on the log link), the reporting location near the lower tail of the
/// data, the reporting scale from a fraction of the spread.
inline UnconstrainedParams default_init(const WeightedSample& data) {
    if (data.empty()) throw std::invalid_argument("default_init: data must be non-empty");
    std::vector<double> values;
    values.reserve(data.size());
    for (const auto& r : data.records) values.push_back(r.value);
    const double m = mean(values);
    const double s = values.size() >= 2 ? stddev(values) : std::max(m, 1.0) * 0.5;
    const double q10 = quantile(values, 0.10);
    UnconstrainedParams u;
    u.alpha = std::log(std::max(m, 1e-9));
    u.mu_bias = q10;
    u.log_sigma_bias = std::log(std::clamp(s / 4.0, 0.05, 100.0));
    return u;
}

/// Local maximizer of the log posterior by Nelder-Mead simplex (converged
/// when the simplex diameter drops below 1e-6, capped at 2000 iterations).
/// A non-converged run still returns the best point found, flagged.
inline MapResult map_estimate(const WeightedSample& data, const PriorSpec& prior,
                              const UnconstrainedParams& init, double tol) {
    if (data.empty()) throw std::invalid_argument("map_estimate: data must be non-empty");
    detail::PosteriorObjective obj(data, prior, tol, std::nullopt);
    return detail::run_map(obj, obj.pack(init));
}

struct McmcConfig {
    int n_chains = 4;
    int n_warmup = 1000;
    int n_draws = 1000;  // per chain, post-warmup
    std::uint64_t seed = 23;
    double tol = 1e-8;
    /// Hold (mu_bias, sigma_bias) fixed at these constrained values and
    /// sample only alpha; the model then reduces to a pure exponential fit.
    std::optional<std::array<double, 2>> fix_bias;
};

struct ParamDiagnostic {
    double rhat = 1.0;
    double ess = 0.0;
};

struct McmcDiagnostics {
    std::array<ParamDiagnostic, 3> params;  // lambda, mu_bias, sigma_bias
    double acceptance_rate = 0.0;           // sampling phase, pooled over chains
    std::vector<double> chain_acceptance;
    bool map_converged = true;
    std::vector<std::string> warnings;
};

inline constexpr std::array<const char*, 3> kParameterNames = {"lambda", "mu_bias", "sigma_bias"};

struct PosteriorDraws {
    std::vector<ExpLogisticParams> draws;  // chain-major order
    std::vector<int> chain_id;             // parallel to draws
    int n_chains = 0;
    int n_warmup = 0;
    int n_draws_per_chain = 0;
    McmcDiagnostics diagnostics;

    std::size_t size() const { return draws.size(); }

    double parameter(std::size_t draw, int which) const {
        const auto& p = draws[draw];
        return which == 0 ? p.lambda : which == 1 ? p.mu_bias : p.sigma_bias;
    }

    std::vector<double> column(int which) const {
        std::vector<double> out;
        out.reserve(draws.size());
        for (std::size_t i = 0; i < draws.size(); ++i) out.push_back(parameter(i, which));
        return out;
    }

    /// Draws of one parameter regrouped per chain (chain ids in sorted order).
    std::vector<std::vector<double>> chains_of(int which) const {
        std::map<int, std::vector<double>> grouped;
        for (std::size_t i = 0; i < draws.size(); ++i)
            grouped[chain_id[i]].push_back(parameter(i, which));
        std::vector<std::vector<double>> out;
        out.reserve(grouped.size());
        for (auto& [id, vals] : grouped) out.push_back(std::move(vals));
        return out;
    }
};

namespace detail {

// d x d dense Cholesky, row-major; returns false when not positive definite.
inline bool cholesky(const std::vector<double>& c, std::size_t d, std::vector<double>& lower) {
    lower.assign(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = c[i * d + j];
            for (std::size_t k = 0; k < j; ++k) s -= lower[i * d + k] * lower[j * d + k];
            if (i == j) {
                if (!(s > 0.0)) return false;
                lower[i * d + i] = std::sqrt(s);
            } else {
                lower[i * d + j] = s / lower[j * d + j];
            }
        }
    }
    return true;
}

struct RunningCovariance {
    std::size_t d;
    std::size_t n = 0;
    std::vector<double> mean;
    std::vector<double> m2;  // row-major d x d

    explicit RunningCovariance(std::size_t dim) : d(dim), mean(dim, 0.0), m2(dim * dim, 0.0) {}

    void update(const std::vector<double>& x) {
        ++n;
        std::vector<double> delta_old(d);
        for (std::size_t j = 0; j < d; ++j) delta_old[j] = x[j] - mean[j];
        for (std::size_t j = 0; j < d; ++j) mean[j] += delta_old[j] / static_cast<double>(n);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) m2[j * d + k] += delta_old[j] * (x[k] - mean[k]);
    }

    std::vector<double> covariance() const {
        std::vector<double> c(d * d, 0.0);
        if (n >= 2)
            for (std::size_t i = 0; i < d * d; ++i) c[i] = m2[i] / static_cast<double>(n - 1);
        return c;
    }
};

inline void split_in_half(const std::vector<double>& chain, std::size_t half,
                          std::vector<std::vector<double>>& out) {
    out.emplace_back(chain.begin(), chain.begin() + half);
    out.emplace_back(chain.end() - half, chain.end());
}

// Split R-hat: each chain is halved, then sqrt of (pooled variance estimate /
// mean within-sequence variance).
inline double split_rhat(const std::vector<std::vector<double>>& chains) {
    std::size_t half = std::numeric_limits<std::size_t>::max();
    for (const auto& c : chains) half = std::min(half, c.size() / 2);
    if (chains.empty() || half < 2) return 1.0;

    std::vector<std::vector<double>> seqs;
    for (const auto& c : chains) split_in_half(c, half, seqs);

    std::vector<double> seq_means, seq_vars;
    for (const auto& s : seqs) {
        seq_means.push_back(mean(s));
        seq_vars.push_back(variance(s));
    }
    const double w = mean(seq_vars);
    const double n = static_cast<double>(half);
    const double b_over_n = seq_means.size() >= 2 ? variance(seq_means) : 0.0;
    const double var_plus = (n - 1.0) / n * w + b_over_n;
    if (!(var_plus > 0.0)) return 1.0;  // all sequences constant and equal
    if (!(w > 0.0)) return std::numeric_limits<double>::infinity();
    return std::sqrt(var_plus / w);
}

// Effective sample size from the combined autocorrelations of the split
// sequences, summed over initial monotone positive pairs.
inline double split_ess(const std::vector<std::vector<double>>& chains) {
    std::size_t half = std::numeric_limits<std::size_t>::max();
    std::size_t total = 0;
    for (const auto& c : chains) {
        half = std::min(half, c.size() / 2);
        total += c.size();
    }
    if (chains.empty() || total == 0) return 0.0;
    if (half < 4) return static_cast<double>(total);

    std::vector<std::vector<double>> seqs;
    for (const auto& c : chains) split_in_half(c, half, seqs);
    const std::size_t m = seqs.size();
    const double n = static_cast<double>(half);
    const double sample_size = static_cast<double>(m) * n;

    std::vector<double> seq_means, seq_vars;
    for (const auto& s : seqs) {
        seq_means.push_back(mean(s));
        seq_vars.push_back(variance(s));
    }
    const double w = mean(seq_vars);
    const double b_over_n = variance(seq_means);
    const double var_plus = (n - 1.0) / n * w + b_over_n;
    if (!(var_plus > 0.0)) return sample_size;

    auto mean_autocov = [&](std::size_t lag) {
        long double acc = 0.0L;
        for (std::size_t j = 0; j < m; ++j) {
            const auto& s = seqs[j];
            long double g = 0.0L;
            for (std::size_t i = 0; i + lag < s.size(); ++i)
                g += (static_cast<long double>(s[i]) - seq_means[j]) *
                     (static_cast<long double>(s[i + lag]) - seq_means[j]);
            acc += g / static_cast<long double>(s.size());
        }
        return static_cast<double>(acc / static_cast<long double>(m));
    };

    double pair_sum = 0.0;
    double prev_pair = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t + 1 < half; t += 2) {
        const double rho_even = 1.0 - (w - mean_autocov(t)) / var_plus;
        const double rho_odd = 1.0 - (w - mean_autocov(t + 1)) / var_plus;
        double pair = rho_even + rho_odd;
        if (pair <= 0.0) break;
        pair = std::min(pair, prev_pair);
        prev_pair = pair;
        pair_sum += pair;
    }
    const double tau = std::max(2.0 * pair_sum - 1.0, 0.01);
    return std::min(sample_size / tau, sample_size);
}

// One adaptive random-walk Metropolis chain. The proposal is N(0, s^2 * C):
// C tracks the running covariance of the warmup history and the global scale
// s follows a Robbins-Monro recursion toward 30% acceptance; both freeze
// when warmup ends.
struct ChainRun {
    std::vector<std::vector<double>> draws;
    int accepted = 0;
};

inline ChainRun run_chain(const PosteriorObjective& obj, const std::vector<double>& start,
                          const std::vector<double>& init_scales, int n_warmup, int n_draws,
                          Rng& rng) {
    const std::size_t d = obj.dim();
    std::vector<double> x = start;
    double lp = obj(x);

    std::vector<double> lower(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) lower[i * d + i] = init_scales[i];
    double log_scale = std::log(2.38 / std::sqrt(static_cast<double>(d)));

    std::vector<double> z(d), proposal(d);
    auto propose = [&]() {
        for (std::size_t i = 0; i < d; ++i) z[i] = rng.normal();
        const double s = std::exp(log_scale);
        for (std::size_t i = 0; i < d; ++i) {
            double step = 0.0;
            for (std::size_t k = 0; k <= i; ++k) step += lower[i * d + k] * z[k];
            proposal[i] = x[i] + s * step;
        }
    };

    RunningCovariance cov(d);
    for (int t = 1; t <= n_warmup; ++t) {
        propose();
        const double lpp = obj(proposal);
        const double alpha = lpp >= lp ? 1.0 : std::exp(lpp - lp);
        if (rng.uniform() < alpha) {
            x = proposal;
            lp = lpp;
        }
        log_scale += (alpha - 0.3) / std::pow(static_cast<double>(t) + 20.0, 0.7);
        cov.update(x);
        if (t >= 100 && t % 25 == 0) {
            auto c = cov.covariance();
            for (std::size_t i = 0; i < d; ++i) c[i * d + i] += 1e-10;
            std::vector<double> candidate;
            if (cholesky(c, d, candidate)) lower = std::move(candidate);
        }
    }

    ChainRun run;
    run.draws.reserve(static_cast<std::size_t>(n_draws));
    for (int t = 0; t < n_draws; ++t) {
        propose();
        const double lpp = obj(proposal);
        const double alpha = lpp >= lp ? 1.0 : std::exp(lpp - lp);
        if (rng.uniform() < alpha) {
            x = proposal;
            lp = lpp;
            ++run.accepted;
        }
        run.draws.push_back(x);
    }
    return run;
}

}  // namespace detail

/// Adaptive random-walk Metropolis over the unconstrained parameterization.
/// Chains start from the MAP estimate, jittered relative to the local
/// curvature; the proposal covariance and scale adapt during warmup only.
/// Diagnostics (split R-hat, ESS, acceptance rate) are attached to the
/// result; threshold violations produce warnings, not failures.
inline PosteriorDraws mcmc_fit(const WeightedSample& data, const PriorSpec& prior,
                               const McmcConfig& config) {
    if (data.empty()) throw std::invalid_argument("mcmc_fit: data must be non-empty");
    if (config.n_chains < 2) throw std::invalid_argument("mcmc_fit: need at least 2 chains");
    if (config.n_draws < 1) throw std::invalid_argument("mcmc_fit: need at least 1 draw");
    if (config.n_warmup < 0) throw std::invalid_argument("mcmc_fit: n_warmup must be >= 0");

    detail::PosteriorObjective obj(data, prior, config.tol, config.fix_bias);
    const std::size_t d = obj.dim();

    const MapResult map = detail::run_map(obj, obj.pack(default_init(data)));
    const std::vector<double> center = obj.pack(map.params);

    // diagonal curvature of the log posterior at the MAP -> per-coordinate scales
    std::vector<double> scales(d, 1.0);
    const double lp0 = obj(center);
    for (std::size_t i = 0; i < d; ++i) {
        const double h = 1e-3 * (1.0 + std::abs(center[i]));
        std::vector<double> up = center, down = center;
        up[i] += h;
        down[i] -= h;
        const double curvature = -(obj(up) - 2.0 * lp0 + obj(down)) / (h * h);
        if (std::isfinite(curvature) && curvature > 0.0)
            scales[i] = std::clamp(1.0 / std::sqrt(curvature), 1e-6, 10.0);
    }

    PosteriorDraws out;
    out.n_chains = config.n_chains;
    out.n_warmup = config.n_warmup;
    out.n_draws_per_chain = config.n_draws;
    out.diagnostics.map_converged = map.converged;
    if (!map.converged)
        out.diagnostics.warnings.push_back("MAP optimization did not converge within its budget");

    long accepted_total = 0;
    for (int c = 0; c < config.n_chains; ++c) {
        Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(c)));
        std::vector<double> start(d);
        double lp = -std::numeric_limits<double>::infinity();
        for (int attempt = 0; attempt < 100 && !std::isfinite(lp); ++attempt) {
            for (std::size_t i = 0; i < d; ++i) start[i] = center[i] + 0.2 * scales[i] * rng.normal();
            lp = obj(start);
        }
        if (!std::isfinite(lp))
            throw NumericalError("mcmc_fit: could not find a finite starting point for chain " +
                                 std::to_string(c));

        const auto run = detail::run_chain(obj, start, scales, config.n_warmup, config.n_draws, rng);
        for (const auto& v : run.draws) {
            out.draws.push_back(obj.unpack(v).constrained());
            out.chain_id.push_back(c);
        }
        out.diagnostics.chain_acceptance.push_back(static_cast<double>(run.accepted) /
                                                   static_cast<double>(config.n_draws));
        accepted_total += run.accepted;
    }
    out.diagnostics.acceptance_rate =
        static_cast<double>(accepted_total) /
        (static_cast<double>(config.n_chains) * static_cast<double>(config.n_draws));

    for (int which = 0; which < 3; ++which) {
        const auto chains = out.chains_of(which);
        auto& diag = out.diagnostics.params[static_cast<std::size_t>(which)];
        diag.rhat = detail::split_rhat(chains);
        diag.ess = detail::split_ess(chains);
        if (diag.rhat > 1.01)
            out.diagnostics.warnings.push_back(std::string("R-hat for ") + kParameterNames[which] +
                                               " is " + std::to_string(diag.rhat) + " (> 1.01)");
        if (diag.ess < 100.0)
            out.diagnostics.warnings.push_back(std::string("effective sample size for ") +
                                               kParameterNames[which] + " is " +
                                               std::to_string(diag.ess) + " (< 100)");
    }
    return out;
}

/// Draws CSV, constrained scale: header chain,iter,lambda,mu_bias,sigma_bias;
/// iter counts post-warmup draws within each chain from 0.
inline void write_draws_csv(const std::string& path, const PosteriorDraws& draws) {
    auto out = open_output(path);
    out << "chain,iter,lambda,mu_bias,sigma_bias\n";
    int iter = 0, prev_chain = draws.chain_id.empty() ? 0 : draws.chain_id.front();
    for (std::size_t i = 0; i < draws.draws.size(); ++i) {
        if (draws.chain_id[i] != prev_chain) {
            prev_chain = draws.chain_id[i];
            iter = 0;
        }
        const auto& p = draws.draws[i];
        out << draws.chain_id[i] << ',' << iter++ << ',' << format_double(p.lambda) << ','
            << format_double(p.mu_bias) << ',' << format_double(p.sigma_bias) << '\n';
    }
    if (!out) throw DataError("failed writing '" + path + "'");
}

inline PosteriorDraws read_draws_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    for (const char* col : {"chain", "iter", "lambda", "mu_bias", "sigma_bias"}) {
        if (table.find_column(col) == CsvTable::npos)
            throw DataError("'" + path + "': draws file is missing column '" + std::string(col) + "'");
    }
    if (table.rows.empty()) throw DataError("'" + path + "': draws file has no rows");
    const std::size_t c_chain = table.find_column("chain");
    const std::size_t c_lambda = table.find_column("lambda");
    const std::size_t c_mu = table.find_column("mu_bias");
    const std::size_t c_sigma = table.find_column("sigma_bias");

    PosteriorDraws out;
    std::map<int, int> per_chain;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const std::size_t line = table.line_of_row(i);
        ExpLogisticParams p;
        p.lambda = parse_double_field(table.rows[i][c_lambda], line, "lambda");
        p.mu_bias = parse_double_field(table.rows[i][c_mu], line, "mu_bias");
        p.sigma_bias = parse_double_field(table.rows[i][c_sigma], line, "sigma_bias");
        if (!p.valid())
            throw DataError("'" + path + "' line " + std::to_string(line) +
                            ": invalid parameter triple (need lambda > 0, sigma_bias > 0)");
        const int chain = static_cast<int>(parse_long_field(table.rows[i][c_chain], line, "chain"));
        out.draws.push_back(p);
        out.chain_id.push_back(chain);
        ++per_chain[chain];
    }
    out.n_chains = static_cast<int>(per_chain.size());
    out.n_draws_per_chain = per_chain.empty() ? 0 : per_chain.begin()->second;
    return out;
}

struct ParameterSummary {
    std::string parameter;
    double median = 0.0;
    double q025 = 0.0;
    double q975 = 0.0;
    double mean = 0.0;
    double rhat = 1.0;
    double ess = 0.0;
};

/// Percentile-interval summaries on the constrained scale; quantiles use
/// linear interpolation between order statistics (type-7 rule). R-hat and
/// ESS are recomputed from the stored chains so summaries of draws loaded
/// from a file are as honest as summaries of a fresh fit.
inline std::vector<ParameterSummary> summarize(const PosteriorDraws& draws) {
    if (draws.draws.empty()) throw std::invalid_argument("summarize: no draws");
    std::vector<ParameterSummary> rows;
    for (int which = 0; which < 3; ++which) {
        ParameterSummary row;
        row.parameter = kParameterNames[static_cast<std::size_t>(which)];
        auto values = draws.column(which);
        row.mean = mean(values);
        std::sort(values.begin(), values.end());
        row.median = quantile_sorted(values, 0.5);
        row.q025 = quantile_sorted(values, 0.025);
        row.q975 = quantile_sorted(values, 0.975);
        const auto chains = draws.chains_of(which);
        row.rhat = detail::split_rhat(chains);
        row.ess = detail::split_ess(chains);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace explogi
