#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace explogi {

struct NelderMeadOptions {
    double diameter_tol = 1e-6;  // converged when max vertex distance to best < this
    int max_iterations = 2000;
    double initial_step = 0.5;  // per-coordinate offset of the initial simplex
};

struct NelderMeadResult {
    std::vector<double> x;
    double fval = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Derivative-free simplex minimization (reflection 1, expansion 2,
/// contraction 0.5, shrink 0.5). Infinite objective values are allowed and
/// treated as ordinary worst values, so the simplex backs out of
/// unevaluable regions.
template <typename F>
NelderMeadResult nelder_mead_minimize(F&& f, const std::vector<double>& init,
                                      const NelderMeadOptions& opt = {}) {
    const std::size_t d = init.size();
    struct Vertex {
        std::vector<double> x;
        double f;
    };
    std::vector<Vertex> simplex;
    simplex.reserve(d + 1);
    simplex.push_back({init, f(init)});
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<double> v = init;
        v[i] += opt.initial_step;
        simplex.push_back({v, f(v)});
    }

    auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
    std::sort(simplex.begin(), simplex.end(), by_value);

    auto diameter = [&]() {
        double dmax = 0.0;
        for (std::size_t i = 1; i <= d; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = simplex[i].x[j] - simplex[0].x[j];
                s += diff * diff;
            }
            dmax = std::max(dmax, std::sqrt(s));
        }
        return dmax;
    };

    NelderMeadResult result;
    int iter = 0;
    for (; iter < opt.max_iterations; ++iter) {
        if (diameter() < opt.diameter_tol) {
            result.converged = true;
            break;
        }

        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[i].x[j];
        }
        for (double& c : centroid) c /= static_cast<double>(d);

        const Vertex& worst = simplex[d];
        auto along = [&](double t) {
            std::vector<double> p(d);
            for (std::size_t j = 0; j < d; ++j) p[j] = centroid[j] + t * (centroid[j] - worst.x[j]);
            return p;
        };

        auto reflected = along(1.0);
        const double fr = f(reflected);
        if (fr < simplex[0].f) {
            auto expanded = along(2.0);
            const double fe = f(expanded);
            if (fe < fr)
                simplex[d] = {std::move(expanded), fe};
            else
                simplex[d] = {std::move(reflected), fr};
        } else if (fr < simplex[d - 1].f) {
            simplex[d] = {std::move(reflected), fr};
        } else {
            // contraction: outside past the reflection point, inside toward the worst vertex
            const bool outside = fr < worst.f;
            auto contracted = along(outside ? 0.5 : -0.5);
            const double fc = f(contracted);
            if ((outside && fc <= fr) || (!outside && fc < worst.f)) {
                simplex[d] = {std::move(contracted), fc};
            } else {
                for (std::size_t i = 1; i <= d; ++i) {
                    for (std::size_t j = 0; j < d; ++j)
                        simplex[i].x[j] = simplex[0].x[j] + 0.5 * (simplex[i].x[j] - simplex[0].x[j]);
                    simplex[i].f = f(simplex[i].x);
                }
            }
        }
        std::sort(simplex.begin(), simplex.end(), by_value);
    }

    result.x = simplex[0].x;
    result.fval = simplex[0].f;
    result.iterations = iter;
    return result;
}

}  // namespace explogi
