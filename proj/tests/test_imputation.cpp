#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "explogi/diagnostics.hpp"
#include "explogi/imputation.hpp"
#include "oracles.hpp"

using explogi::CompletedDataset;
using explogi::ExpLogisticParams;
using explogi::Origin;
using explogi::PosteriorDraws;
using explogi::Rng;
using explogi::WeightedSample;

namespace {

const ExpLogisticParams kSimParams{0.5, 2.0, 0.5};

WeightedSample reported_sample(const ExpLogisticParams& p, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    WeightedSample out;
    for (double x : explogi::sample_reported(p, n, rng)) out.records.push_back({x, 1.0});
    return out;
}

PosteriorDraws synthetic_draws(const std::vector<ExpLogisticParams>& triples) {
    PosteriorDraws d;
    for (std::size_t i = 0; i < triples.size(); ++i) {
        d.draws.push_back(triples[i]);
        d.chain_id.push_back(static_cast<int>(i % 2));
    }
    return d;
}

}  // namespace

TEST_CASE("missing-count formula", "[imputation]")
{
    REQUIRE(explogi::n_new(250.0, 1.0) == 0);
    REQUIRE(explogi::n_new(250.0, 0.5) == 250);
    // ties round to even
    REQUIRE(explogi::n_new(2.5, 0.5) == 2);
    REQUIRE(explogi::n_new(3.5, 0.5) == 4);

    REQUIRE_THROWS_AS(explogi::n_new(250.0, 0.0), std::domain_error);
    REQUIRE_THROWS_AS(explogi::n_new(250.0, 1.2), std::domain_error);
    REQUIRE_THROWS_AS(explogi::n_new(250.0, -0.1), std::domain_error);
    REQUIRE_THROWS_AS(explogi::n_new(0.0, 0.5), std::domain_error);

    SECTION("strictly decreasing in k")
    {
        std::size_t prev = explogi::n_new(1000.0, 0.05);
        for (double k = 0.10; k < 1.0; k += 0.05) {
            const std::size_t n = explogi::n_new(1000.0, k);
            REQUIRE(n < prev);
            prev = n;
        }
    }
    SECTION("simulated-data posterior scale")
    {
        // at the generating parameters, 250 observations imply ~371 missing
        const double k = explogi::normalizer_k(kSimParams, 1e-10);
        const std::size_t n = explogi::n_new(250.0, k);
        REQUIRE(n > 229);
        REQUIRE(n < 1111);
    }
}

TEST_CASE("missingness fraction", "[imputation]")
{
    REQUIRE(explogi::missingness_fraction(1.0) == 0.0);
    REQUIRE(explogi::missingness_fraction(0.5) == 0.5);
    REQUIRE_THROWS_AS(explogi::missingness_fraction(0.0), std::domain_error);
    REQUIRE_THROWS_AS(explogi::missingness_fraction(1.5), std::domain_error);

    SECTION("crash-data parameters imply roughly three quarters missing")
    {
        const double k = explogi::normalizer_k({0.12, 12.2, 1.30}, 1e-10);
        const double frac = explogi::missingness_fraction(k);
        REQUIRE(frac == Catch::Approx(1.0 - oracle::kRef_k_table1).margin(1e-8));
        REQUIRE(frac > 0.70);
        REQUIRE(frac < 0.84);
    }
    SECTION("survey-scale count matches the formula")
    {
        const double k = explogi::normalizer_k({0.12, 12.2, 1.30}, 1e-10);
        const std::size_t n = explogi::n_new(1.2e6, k);
        REQUIRE(n > 3'500'000);
        REQUIRE(n < 4'100'000);
        const double expected = 1.2e6 * (1.0 - oracle::kRef_k_table1) / oracle::kRef_k_table1;
        REQUIRE(static_cast<double>(n) == Catch::Approx(expected).margin(5.0));
    }
}

TEST_CASE("single imputation", "[imputation]")
{
    SECTION("reporting everywhere leaves the dataset unchanged")
    {
        const auto data = reported_sample(kSimParams, 100, 1);
        Rng rng(2);
        const auto done = explogi::impute_one(data, {0.5, -1e6, 0.5}, rng, 1e-8);
        REQUIRE(done.n_new == 0);
        REQUIRE(done.records.size() == 100);
        for (std::size_t i = 0; i < 100; ++i) {
            REQUIRE(done.records[i].value == data.records[i].value);
            REQUIRE(done.records[i].weight == data.records[i].weight);
            REQUIRE(done.records[i].origin == Origin::observed);
        }
    }
    SECTION("completed dataset mimics the population")
    {
        // reported records in proportion k, imputation fills the 1-k stratum
        const auto n_obs = static_cast<std::size_t>(
            std::lround(100'000 * explogi::normalizer_k(kSimParams, 1e-10)));
        const auto data = reported_sample(kSimParams, n_obs, 3);
        Rng rng(4);
        const auto done = explogi::impute_one(data, kSimParams, rng, 1e-8);
        std::vector<double> values;
        for (const auto& r : done.records) values.push_back(r.value);
        REQUIRE(explogi::ks_statistic(values, kSimParams.lambda) <
                oracle::ks_critical_alpha001(values.size()));
    }
    SECTION("imputed records carry weight 1 and the draw id")
    {
        WeightedSample data;
        data.records = {{5.0, 7.5}, {9.0, 2.5}};
        Rng rng(5);
        const auto done = explogi::impute_one(data, kSimParams, rng, 1e-8, 42);
        REQUIRE(done.n_new == explogi::n_new(10.0, done.k_used));
        std::size_t imputed = 0;
        for (const auto& r : done.records) {
            REQUIRE(r.draw_id == 42);
            if (r.origin == Origin::imputed) {
                REQUIRE(r.weight == 1.0);
                ++imputed;
            }
        }
        REQUIRE(imputed == done.n_new);
    }
    SECTION("empty data is rejected")
    {
        Rng rng(6);
        REQUIRE_THROWS_AS(explogi::impute_one(WeightedSample{}, kSimParams, rng, 1e-8),
                          std::invalid_argument);
    }
}

TEST_CASE("multiple imputation", "[imputation]")
{
    const auto data = reported_sample(kSimParams, 200, 7);
    const auto draws = synthetic_draws({{0.45, 1.8, 0.4},
                                        {0.5, 2.0, 0.5},
                                        {0.55, 2.2, 0.6},
                                        {0.6, 2.4, 0.7},
                                        {0.65, 2.6, 0.8},
                                        {0.42, 1.7, 0.45}});

    SECTION("m = 1 equals single imputation on the selected draw")
    {
        const auto replicas = explogi::impute_multiple(data, draws, 1, 23, 1e-8);
        REQUIRE(replicas.size() == 1);
        Rng rng(explogi::derive_seed(23, 0));
        const auto direct = explogi::impute_one(data, draws.draws[0], rng, 1e-8, 0);
        REQUIRE(replicas[0].records.size() == direct.records.size());
        for (std::size_t i = 0; i < direct.records.size(); ++i) {
            REQUIRE(replicas[0].records[i].value == direct.records[i].value);
            REQUIRE(replicas[0].records[i].origin == direct.records[i].origin);
        }
    }
    SECTION("the observed block is identical across replicas")
    {
        const auto replicas = explogi::impute_multiple(data, draws, 5, 23, 1e-8);
        REQUIRE(replicas.size() == 5);
        for (const auto& rep : replicas) {
            for (std::size_t i = 0; i < data.size(); ++i) {
                REQUIRE(rep.records[i].value == data.records[i].value);
                REQUIRE(rep.records[i].weight == data.records[i].weight);
                REQUIRE(rep.records[i].origin == Origin::observed);
            }
        }
    }
    SECTION("replica sizes stay inside the per-draw range")
    {
        std::size_t lo = SIZE_MAX, hi = 0;
        for (const auto& p : draws.draws) {
            const std::size_t n =
                explogi::n_new(data.total_weight(), explogi::normalizer_k(p, 1e-10));
            lo = std::min(lo, n);
            hi = std::max(hi, n);
        }
        for (const auto& rep : explogi::impute_multiple(data, draws, 5, 23, 1e-8)) {
            REQUIRE(rep.n_new >= lo);
            REQUIRE(rep.n_new <= hi);
        }
    }
    SECTION("deterministic in (data, draws, m, seed)")
    {
        const auto a = explogi::impute_multiple(data, draws, 3, 23, 1e-8);
        const auto b = explogi::impute_multiple(data, draws, 3, 23, 1e-8);
        for (std::size_t r = 0; r < 3; ++r) {
            REQUIRE(a[r].records.size() == b[r].records.size());
            for (std::size_t i = 0; i < a[r].records.size(); ++i)
                REQUIRE(a[r].records[i].value == b[r].records[i].value);
        }
        const auto c = explogi::impute_multiple(data, draws, 3, 24, 1e-8);
        bool any_diff = false;
        for (std::size_t r = 0; r < 3 && !any_diff; ++r)
            for (std::size_t i = data.size(); i < std::min(a[r].records.size(), c[r].records.size()); ++i)
                if (a[r].records[i].value != c[r].records[i].value) {
                    any_diff = true;
                    break;
                }
        REQUIRE(any_diff);
    }
    SECTION("preconditions")
    {
        REQUIRE_THROWS_AS(explogi::impute_multiple(data, draws, 0, 23, 1e-8), std::invalid_argument);
        REQUIRE_THROWS_AS(explogi::impute_multiple(data, draws, 7, 23, 1e-8), std::invalid_argument);
    }
}

TEST_CASE("averaged imputation", "[imputation]")
{
    const auto data = reported_sample(kSimParams, 150, 8);

    SECTION("constant draws reduce to single imputation at that value")
    {
        const auto draws = synthetic_draws({kSimParams, kSimParams, kSimParams, kSimParams});
        const auto avg = explogi::impute_average(data, draws, 23, 1e-8);
        Rng rng(explogi::derive_seed(23, static_cast<std::uint64_t>(explogi::kAverageDrawId)));
        const auto direct = explogi::impute_one(data, kSimParams, rng, 1e-8, explogi::kAverageDrawId);
        REQUIRE(avg.records.size() == direct.records.size());
        for (std::size_t i = 0; i < avg.records.size(); ++i)
            REQUIRE(avg.records[i].value == direct.records[i].value);
        REQUIRE(avg.draw_id == explogi::kAverageDrawId);
    }
    SECTION("averaged size lies between the per-draw extremes")
    {
        const auto draws = synthetic_draws(
            {{0.4, 1.6, 0.4}, {0.5, 2.0, 0.5}, {0.6, 2.4, 0.6}, {0.7, 2.8, 0.7}});
        std::size_t lo = SIZE_MAX, hi = 0;
        for (const auto& p : draws.draws) {
            const std::size_t n =
                explogi::n_new(data.total_weight(), explogi::normalizer_k(p, 1e-10));
            lo = std::min(lo, n);
            hi = std::max(hi, n);
        }
        const auto avg = explogi::impute_average(data, draws, 23, 1e-8);
        REQUIRE(avg.n_new >= lo);
        REQUIRE(avg.n_new <= hi);
    }
    SECTION("empty draws are an error, not a default")
    {
        REQUIRE_THROWS_AS(explogi::impute_average(data, PosteriorDraws{}, 23, 1e-8),
                          std::invalid_argument);
    }
}

TEST_CASE("imputation leaves its input untouched", "[imputation][property]")
{
    const auto data = reported_sample(kSimParams, 80, 9);
    const auto copy = data;
    Rng rng(10);
    (void)explogi::impute_one(data, kSimParams, rng, 1e-8);
    const auto draws = synthetic_draws({{0.5, 2.0, 0.5}, {0.6, 2.2, 0.5}});
    (void)explogi::impute_multiple(data, draws, 2, 23, 1e-8);
    (void)explogi::impute_average(data, draws, 23, 1e-8);
    REQUIRE(data.records == copy.records);
}

TEST_CASE("completed datasets serialize with origin labels", "[imputation]")
{
    WeightedSample data;
    data.records = {{3.0, 2.0}};
    Rng rng(11);
    const auto done = explogi::impute_one(data, kSimParams, rng, 1e-8, 4);
    const std::string path = "test_imputation_out.csv";
    explogi::write_completed_csv(path, done);

    const auto table = explogi::read_csv(path);
    REQUIRE(table.columns == std::vector<std::string>{"value", "weight", "origin", "draw_id"});
    REQUIRE(table.rows.size() == done.records.size());
    REQUIRE(table.rows[0][2] == "observed");
    REQUIRE(table.rows[0][3] == "4");
    if (table.rows.size() > 1) REQUIRE(table.rows[1][2] == "imputed");
    std::remove(path.c_str());
}
