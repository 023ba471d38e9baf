#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "explogi/errors.hpp"
#include "explogi/quadrature.hpp"
#include "explogi/rng.hpp"

namespace explogi {

/// Parameters of the selection model: an exponential population density with
/// rate `lambda`, thinned by a logistic reporting probability with location
/// `mu_bias` and scale `sigma_bias` (both in the units of the data).
struct ExpLogisticParams {
    double lambda = 1.0;
    double mu_bias = 0.0;
    double sigma_bias = 1.0;

    bool valid() const {
        return std::isfinite(lambda) && lambda > 0.0 && std::isfinite(mu_bias) &&
               std::isfinite(sigma_bias) && sigma_bias > 0.0;
    }

    void validate() const {
        if (!valid()) {
            throw std::domain_error("ExpLogisticParams: need lambda > 0, sigma_bias > 0, all finite (lambda=" +
                                    std::to_string(lambda) + ", mu_bias=" + std::to_string(mu_bias) +
                                    ", sigma_bias=" + std::to_string(sigma_bias) + ")");
        }
    }
};

/// ln Exp(x | lambda) = ln(lambda) - lambda*x
inline double exp_logpdf(double x, double lambda) {
    if (!(x >= 0.0)) throw std::domain_error("exp_logpdf: x must be >= 0");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::domain_error("exp_logpdf: lambda must be > 0");
    return std::log(lambda) - lambda * x;
}

/// ln of the logistic CDF, safe against overflow for any |x - mu| / sigma.
inline double logistic_logcdf(double x, double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("logistic_logcdf: sigma must be > 0");
    const double z = (x - mu) / sigma;
    if (z >= 0.0) return -std::log1p(std::exp(-z));
    return z - std::log1p(std::exp(z));
}

/// ln of the logistic complementary CDF (survival function).
inline double logistic_logccdf(double x, double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("logistic_logccdf: sigma must be > 0");
    const double z = (x - mu) / sigma;
    if (z <= 0.0) return -std::log1p(std::exp(z));
    return -z - std::log1p(std::exp(-z));
}

/// Logistic CDF on the linear scale, stable at both tails.
inline double logistic_cdf(double x, double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("logistic_cdf: sigma must be > 0");
    const double z = (x - mu) / sigma;
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

inline double logistic_ccdf(double x, double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("logistic_ccdf: sigma must be > 0");
    const double z = (x - mu) / sigma;
    if (z <= 0.0) return 1.0 / (1.0 + std::exp(z));
    const double e = std::exp(-z);
    return e / (1.0 + e);
}

/// Log density of the reported stratum, without the normalizing constant:
/// ln Exp(x | lambda) + ln LogisticCDF(x | mu_bias, sigma_bias).
inline double explogistic_unnorm_logpdf(double x, const ExpLogisticParams& p) {
    p.validate();
    return exp_logpdf(x, p.lambda) + logistic_logcdf(x, p.mu_bias, p.sigma_bias);
}

/// Reported fraction k = integral over [0, inf) of Exp(x|lambda) *
/// LogisticCDF(x|mu_bias, sigma_bias) dx, in (0, 1].
///
/// The substitution u = exp(-lambda*x) maps the half-line onto (0, 1] with
/// unit Jacobian against the exponential density, so the integrand becomes
/// LogisticCDF(-ln(u)/lambda), bounded in [0, 1] and free of any arbitrary
/// truncation point. Adaptive Gauss-Kronrod then resolves it to abs_tol.
inline double normalizer_k(const ExpLogisticParams& p, double tol) {
    p.validate();
    if (!(tol > 0.0)) throw std::domain_error("normalizer_k: tol must be > 0");
    const double lambda = p.lambda, mu = p.mu_bias, sigma = p.sigma_bias;
    auto integrand = [lambda, mu, sigma](double u) {
        return logistic_cdf(-std::log(u) / lambda, mu, sigma);
    };
    // The CDF transition happens at x = mu + w*sigma, i.e. u = e^{-lambda*mu} *
    // e^{-w*lambda*sigma}. When mu > 0 that layer can be far narrower than any
    // uniform panel, so its location is handed to the integrator explicitly.
    std::vector<double> breakpoints;
    if (mu > 0.0) {
        for (double w : {-30.0, -10.0, -3.0, 0.0, 3.0, 10.0, 30.0}) {
            const double u = std::exp(-lambda * (mu + w * sigma));
            if (u > 0.0 && u < 1.0) breakpoints.push_back(u);
        }
    }
    QuadratureOptions opt;
    opt.abs_tol = tol;
    const double k = integrate_adaptive(integrand, 0.0, 1.0, opt, breakpoints);
    if (!(k > 0.0)) {
        throw NormalizerUnderflow("normalizer_k: reporting probability underflowed to zero (lambda=" +
                                  std::to_string(lambda) + ", mu_bias=" + std::to_string(mu) +
                                  ", sigma_bias=" + std::to_string(sigma) + ")");
    }
    // quadrature noise may overshoot the exact bound by ~tol
    return std::min(k, 1.0);
}

/// Normalized log density of the reported stratum.
inline double explogistic_logpdf(double x, const ExpLogisticParams& p, double tol) {
    return explogistic_unnorm_logpdf(x, p) - std::log(normalizer_k(p, tol));
}

namespace detail {

template <typename AcceptProb>
std::vector<double> rejection_sample(const ExpLogisticParams& p, std::size_t n, Rng& rng,
                                     AcceptProb&& accept_prob, const char* what) {
    p.validate();
    constexpr int kMaxAttemptsPerDraw = 10000;
    std::vector<double> out;
    out.reserve(n);
    while (out.size() < n) {
        int attempts = 0;
        for (;;) {
            if (++attempts > kMaxAttemptsPerDraw) {
                throw NumericalError(std::string(what) +
                                     ": rejection sampling exceeded 10^4 attempts for one draw; "
                                     "acceptance probability is numerically zero");
            }
            const double x = rng.exponential(p.lambda);
            if (rng.uniform() < accept_prob(x)) {
                out.push_back(x);
                break;
            }
        }
    }
    return out;
}

}  // namespace detail

/// Exact draws from the normalized reported density: proposals from
/// Exp(lambda) are accepted with probability LogisticCDF(x), which is the
/// selection mechanism itself, so no envelope constant is needed.
inline std::vector<double> sample_reported(const ExpLogisticParams& p, std::size_t n, Rng& rng) {
    return detail::rejection_sample(
        p, n, rng, [&p](double x) { return logistic_cdf(x, p.mu_bias, p.sigma_bias); },
        "sample_reported");
}

/// Exact draws from the unreported stratum, density proportional to
/// Exp(x|lambda) * LogisticCCDF(x): inverse probability weighting by
/// rejection with the complementary CDF as acceptance probability.
inline std::vector<double> sample_missing(const ExpLogisticParams& p, std::size_t n, Rng& rng) {
    return detail::rejection_sample(
        p, n, rng, [&p](double x) { return logistic_ccdf(x, p.mu_bias, p.sigma_bias); },
        "sample_missing");
}

}  // namespace explogi
