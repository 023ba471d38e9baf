// Command-line surface for the exponential-logistic selection model:
// simulate biased samples, fit the model, impute the unreported stratum,
// emit posterior predictive curves, and filter CISS-style crash extracts.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "explogi/explogi.hpp"

namespace {

struct SimulateArgs {
    std::size_t n_pool = 2500;
    double lambda = 0.5;
    double mu = 2.0;
    double sigma = 0.5;
    std::size_t n_obs = 250;
    std::uint64_t seed = 23;
    std::string out;
};

struct FitArgs {
    std::string data;
    std::string value_col = "value";
    std::string weight_col;
    std::string prior_preset = "listing6";
    int chains = 4;
    int warmup = 1000;
    int draws = 1000;
    std::uint64_t seed = 23;
    double tol = 1e-8;
    std::string out_draws;
    std::string out_summary;
};

struct ImputeArgs {
    std::string data;
    std::string draws;
    std::string mode = "multiple";
    std::size_t m = 5;
    std::uint64_t seed = 23;
    double tol = 1e-8;
    std::string out_prefix;
};

struct PpcArgs {
    std::string draws;
    std::string data;
    std::size_t curves = 20;
    double tol = 1e-8;
    std::string out;
};

struct CissArgs {
    std::string gv;
    std::string occ;
    bool strict_case = false;
    std::string out;
};

int run_simulate(const SimulateArgs& args) {
    if (args.n_obs > args.n_pool) {
        std::cerr << "usage error: --n-obs must not exceed --n-pool\n";
        return 1;
    }
    explogi::Rng rng(args.seed);
    const auto sample =
        explogi::simulate_biased(args.n_pool, args.lambda, args.mu, args.sigma, args.n_obs, rng);
    explogi::write_weighted_csv(args.out, sample);
    std::cout << "wrote " << sample.size() << " records to " << args.out << "\n";
    return 0;
}

explogi::PriorSpec prior_from_preset(const std::string& name) {
    if (name == "eq4") return explogi::PriorSpec::wide();
    return explogi::PriorSpec::defaults();
}

int run_fit(const FitArgs& args) {
    std::optional<std::string> weight_col;
    if (!args.weight_col.empty()) weight_col = args.weight_col;
    const auto data = explogi::read_weighted_csv(args.data, args.value_col, weight_col);

    explogi::McmcConfig config;
    config.n_chains = args.chains;
    config.n_warmup = args.warmup;
    config.n_draws = args.draws;
    config.seed = args.seed;
    config.tol = args.tol;
    const auto draws = explogi::mcmc_fit(data, prior_from_preset(args.prior_preset), config);

    explogi::write_draws_csv(args.out_draws, draws);
    const auto summary = explogi::summarize(draws);
    {
        auto out = explogi::open_output(args.out_summary);
        out << "parameter,median,q2.5,q97.5,mean,rhat,ess\n";
        for (const auto& row : summary) {
            out << row.parameter << ',' << explogi::format_double(row.median) << ','
                << explogi::format_double(row.q025) << ',' << explogi::format_double(row.q975) << ','
                << explogi::format_double(row.mean) << ',' << explogi::format_double(row.rhat) << ','
                << explogi::format_double(row.ess) << '\n';
        }
        if (!out) throw explogi::DataError("failed writing '" + args.out_summary + "'");
    }

    std::cout << std::left << std::setw(12) << "parameter" << std::right << std::setw(10) << "median"
              << std::setw(10) << "q2.5" << std::setw(10) << "q97.5" << std::setw(10) << "mean"
              << std::setw(8) << "rhat" << std::setw(9) << "ess" << "\n";
    for (const auto& row : summary) {
        std::cout << std::left << std::setw(12) << row.parameter << std::right << std::fixed
                  << std::setprecision(4) << std::setw(10) << row.median << std::setw(10) << row.q025
                  << std::setw(10) << row.q975 << std::setw(10) << row.mean << std::setprecision(3)
                  << std::setw(8) << row.rhat << std::setprecision(0) << std::setw(9) << row.ess
                  << "\n";
        std::cout.unsetf(std::ios::fixed);
        std::cout << std::setprecision(6);
    }
    std::cout << "acceptance rate: " << std::setprecision(3) << draws.diagnostics.acceptance_rate
              << std::setprecision(6) << "\n";
    for (const auto& w : draws.diagnostics.warnings) std::cout << "warning: " << w << "\n";
    return 0;
}

int run_impute(const ImputeArgs& args) {
    const auto data = explogi::read_pipeline_sample(args.data);
    const auto draws = explogi::read_draws_csv(args.draws);

    std::vector<explogi::CompletedDataset> replicas;
    std::vector<std::string> files;
    if (args.mode == "average") {
        replicas.push_back(explogi::impute_average(data, draws, args.seed, args.tol));
        files.push_back(args.out_prefix + "_average.csv");
    } else {
        replicas = explogi::impute_multiple(data, draws, args.m, args.seed, args.tol);
        for (std::size_t r = 1; r <= replicas.size(); ++r)
            files.push_back(args.out_prefix + "_" + std::to_string(r) + ".csv");
    }
    for (std::size_t r = 0; r < replicas.size(); ++r)
        explogi::write_completed_csv(files[r], replicas[r]);

    const std::string manifest_path = args.out_prefix + "_manifest.txt";
    auto manifest = explogi::open_output(manifest_path);
    manifest << "command = impute\n"
             << "mode = " << args.mode << "\n"
             << "m = " << replicas.size() << "\n"
             << "seed = " << args.seed << "\n"
             << "tol = " << explogi::format_double(args.tol) << "\n"
             << "n_obs = " << data.size() << "\n"
             << "total_weight = " << explogi::format_double(data.total_weight()) << "\n";
    for (std::size_t r = 0; r < replicas.size(); ++r) {
        const auto& rep = replicas[r];
        const std::string key = "replica_" + std::to_string(r + 1) + "_";
        manifest << key << "file = " << files[r] << "\n"
                 << key << "draw_id = " << rep.draw_id << "\n"
                 << key << "lambda = " << explogi::format_double(rep.params_used.lambda) << "\n"
                 << key << "mu_bias = " << explogi::format_double(rep.params_used.mu_bias) << "\n"
                 << key << "sigma_bias = " << explogi::format_double(rep.params_used.sigma_bias)
                 << "\n"
                 << key << "k = " << explogi::format_double(rep.k_used) << "\n"
                 << key << "n_new = " << rep.n_new << "\n";
    }
    if (!manifest) throw explogi::DataError("failed writing '" + manifest_path + "'");
    std::cout << "wrote " << replicas.size() << (replicas.size() == 1 ? " dataset" : " datasets")
              << " and " << manifest_path << "\n";
    return 0;
}

int run_ppc(const PpcArgs& args) {
    const auto draws = explogi::read_draws_csv(args.draws);
    double upper_at_least = 0.0;
    if (!args.data.empty()) {
        const auto data = explogi::read_pipeline_sample(args.data);
        for (const auto& r : data.records) upper_at_least = std::max(upper_at_least, r.value);
    }
    const auto grid = explogi::default_ppc_grid(draws, 512, upper_at_least);
    const auto rows = explogi::ppc_curves(draws, args.curves, grid, args.tol);

    auto out = explogi::open_output(args.out);
    out << "draw_id,x,explogistic_pdf,exponential_pdf,logistic_cdf\n";
    for (const auto& row : rows) {
        out << row.draw_id << ',' << explogi::format_double(row.x) << ','
            << explogi::format_double(row.explogistic_pdf) << ','
            << explogi::format_double(row.exponential_pdf) << ','
            << explogi::format_double(row.logistic_cdf) << '\n';
    }
    if (!out) throw explogi::DataError("failed writing '" + args.out + "'");
    std::cout << "wrote " << rows.size() << " rows to " << args.out << "\n";
    return 0;
}

int run_ciss_filter(const CissArgs& args) {
    const auto gv = explogi::read_csv(args.gv);
    const auto occ = explogi::read_csv(args.occ);
    const auto result = explogi::ciss_filter(gv, occ, args.strict_case);
    explogi::write_weighted_csv(args.out, result.sample);

    const auto& rep = result.report;
    std::cout << "vehicles: " << rep.vehicles_total << "\n"
              << "kept: " << rep.kept << "\n"
              << "excluded (no occupants): " << rep.excluded_no_occupants << "\n"
              << "excluded (occupant injured): " << rep.excluded_injured << "\n";
    if (args.strict_case)
        std::cout << "excluded (injury elsewhere in case): " << rep.excluded_case_injured << "\n";
    std::cout << "excluded (body category): " << rep.excluded_bodycat << "\n"
              << "excluded (crash configuration): " << rep.excluded_crashconf << "\n"
              << "excluded (delta-v unavailable): " << rep.excluded_missing_dv << "\n"
              << "total weight kept: " << explogi::format_double(result.sample.total_weight())
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exponential-logistic selection model: correct reporting bias in "
                 "positive-valued data by fitting and imputing the unreported stratum"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* cmd_sim = app.add_subcommand("simulate", "draw a biased sample from known parameters");
    cmd_sim->add_option("--n-pool", sim.n_pool, "population pool size")->capture_default_str();
    cmd_sim->add_option("--lambda", sim.lambda, "exponential rate")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_sim->add_option("--mu", sim.mu, "reporting threshold location")->capture_default_str();
    cmd_sim->add_option("--sigma", sim.sigma, "reporting threshold scale")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_sim->add_option("--n-obs", sim.n_obs, "observed sample size")->capture_default_str();
    cmd_sim->add_option("--seed", sim.seed, "random seed")->capture_default_str();
    cmd_sim->add_option("--out", sim.out, "output CSV (value,weight)")->required();

    FitArgs fit;
    auto* cmd_fit = app.add_subcommand("fit", "fit the selection model by MAP + MCMC");
    cmd_fit->add_option("--data", fit.data, "input CSV")->required();
    cmd_fit->add_option("--value-col", fit.value_col, "value column name")->capture_default_str();
    cmd_fit->add_option("--weight-col", fit.weight_col, "weight column name (omit for unweighted)");
    cmd_fit->add_option("--prior-preset", fit.prior_preset,
                        "link-scale priors: listing6 = N(0,5), N(0,5), N(0,1); eq4 = N(0,10) x3")
        ->check(CLI::IsMember({"listing6", "eq4"}))
        ->capture_default_str();
    cmd_fit->add_option("--chains", fit.chains, "number of chains")
        ->check(CLI::Range(2, 64))
        ->capture_default_str();
    cmd_fit->add_option("--warmup", fit.warmup, "warmup iterations per chain")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd_fit->add_option("--draws", fit.draws, "post-warmup draws per chain")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_fit->add_option("--seed", fit.seed, "random seed")->capture_default_str();
    cmd_fit->add_option("--tol", fit.tol, "quadrature absolute tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_fit->add_option("--out-draws", fit.out_draws, "output draws CSV")->required();
    cmd_fit->add_option("--out-summary", fit.out_summary, "output summary CSV")->required();

    ImputeArgs imp;
    auto* cmd_imp = app.add_subcommand("impute", "complete the dataset from posterior draws");
    cmd_imp->add_option("--data", imp.data, "observed data CSV (value[,weight])")->required();
    cmd_imp->add_option("--draws", imp.draws, "posterior draws CSV")->required();
    cmd_imp->add_option("--mode", imp.mode, "replica mode")
        ->check(CLI::IsMember({"multiple", "average"}))
        ->capture_default_str();
    cmd_imp->add_option("--m", imp.m, "number of replicas (multiple mode)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_imp->add_option("--seed", imp.seed, "random seed")->capture_default_str();
    cmd_imp->add_option("--tol", imp.tol, "quadrature absolute tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_imp->add_option("--out-prefix", imp.out_prefix, "output file prefix")->required();

    PpcArgs ppc;
    auto* cmd_ppc = app.add_subcommand("ppc", "posterior predictive curves as plot-ready CSV");
    cmd_ppc->add_option("--draws", ppc.draws, "posterior draws CSV")->required();
    cmd_ppc->add_option("--data", ppc.data, "observed data CSV; extends the grid to cover it");
    cmd_ppc->add_option("--curves", ppc.curves, "number of curves")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_ppc->add_option("--tol", ppc.tol, "quadrature absolute tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_ppc->add_option("--out", ppc.out, "output CSV")->required();

    CissArgs ciss;
    auto* cmd_ciss = app.add_subcommand("ciss-filter",
                                        "select uninjured passenger-vehicle rear-end records "
                                        "from GV/OCC extracts");
    cmd_ciss->add_option("--gv", ciss.gv, "GV (vehicle) CSV")->required();
    cmd_ciss->add_option("--occ", ciss.occ, "OCC (occupant) CSV")->required();
    cmd_ciss->add_flag("--strict-case", ciss.strict_case,
                       "also require every occupant in the whole case to be uninjured");
    cmd_ciss->add_option("--out", ciss.out, "output CSV (value,weight)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(cmd_sim)) return run_simulate(sim);
        if (app.got_subcommand(cmd_fit)) return run_fit(fit);
        if (app.got_subcommand(cmd_imp)) return run_impute(imp);
        if (app.got_subcommand(cmd_ppc)) return run_ppc(ppc);
        if (app.got_subcommand(cmd_ciss)) return run_ciss_filter(ciss);
    } catch (const explogi::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const explogi::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
