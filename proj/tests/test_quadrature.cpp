#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "explogi/quadrature.hpp"
#include "oracles.hpp"

using explogi::integrate_adaptive;
using explogi::QuadratureOptions;

TEST_CASE("gk15 panel is exact on low-degree polynomials", "[quadrature]")
{
    auto f = [](double x) { return x * x * x * x * x * x; };  // x^6
    auto panel = explogi::detail::gk15(f, 0.0, 1.0);
    REQUIRE(panel.value == Catch::Approx(1.0 / 7.0).epsilon(1e-14));
    REQUIRE(panel.error < 1e-14);
}

TEST_CASE("adaptive integration matches analytic results", "[quadrature]")
{
    SECTION("exponential tail")
    {
        const double v = integrate_adaptive([](double x) { return std::exp(-x); }, 0.0, 10.0);
        REQUIRE(v == Catch::Approx(1.0 - std::exp(-10.0)).margin(1e-10));
    }
    SECTION("oscillatory")
    {
        const double v = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, 3.14159265358979323846);
        REQUIRE(v == Catch::Approx(2.0).margin(1e-10));
    }
    SECTION("degenerate interval") { REQUIRE(integrate_adaptive([](double) { return 1.0; }, 2.0, 2.0) == 0.0); }
}

TEST_CASE("adaptive integration localizes a jump", "[quadrature]")
{
    auto step = [](double x) { return x < 0.3 ? 0.0 : 1.0; };
    QuadratureOptions opt;
    opt.abs_tol = 1e-9;
    const double v = integrate_adaptive(step, 0.0, 1.0, opt);
    REQUIRE(v == Catch::Approx(0.7).margin(1e-8));
}

TEST_CASE("adaptive integration agrees with the Simpson oracle", "[quadrature]")
{
    auto f = [](double x) { return oracle::logistic_cdf_ref(x, 0.4, 0.07); };
    const double adaptive = integrate_adaptive(f, 0.0, 1.0);
    const double reference = oracle::simpson(f, 0.0, 1.0, 1 << 18);
    REQUIRE(adaptive == Catch::Approx(reference).margin(1e-8));
}

TEST_CASE("exhausting the panel budget throws instead of guessing", "[quadrature]")
{
    QuadratureOptions opt;
    opt.abs_tol = 1e-14;
    opt.max_panels = 6;
    auto rough = [](double x) { return std::sqrt(std::abs(std::sin(50.0 * x))); };
    REQUIRE_THROWS_AS(integrate_adaptive(rough, 0.0, 1.0, opt), explogi::QuadratureNonConvergence);
}

TEST_CASE("invalid quadrature arguments are rejected", "[quadrature]")
{
    auto f = [](double) { return 1.0; };
    QuadratureOptions opt;
    opt.abs_tol = -1.0;
    REQUIRE_THROWS_AS(integrate_adaptive(f, 0.0, 1.0, opt), std::domain_error);
    REQUIRE_THROWS_AS(integrate_adaptive(f, 1.0, 0.0), std::domain_error);
}
