// End-to-end checks of the command-line tool. Run as: test_cli <path-to-cli>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "explogi/csv.hpp"
#include "explogi/data.hpp"

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

#define CHECK(cond)                                                                     \
    do {                                                                                \
        if (!(cond)) {                                                                  \
            std::cerr << "FAILED at " << __FILE__ << ":" << __LINE__ << ": " << #cond   \
                      << "\n";                                                          \
            ++g_failures;                                                               \
        }                                                                               \
    } while (0)

std::string g_cli;

int run(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool same_bytes(const std::string& a, const std::string& b) { return slurp(a) == slurp(b); }

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

void test_simulate() {
    CHECK(run("simulate --out sim.csv") == 0);
    const auto table = explogi::read_csv("sim.csv");
    CHECK(table.columns == (std::vector<std::string>{"value", "weight"}));
    CHECK(table.rows.size() == 250);
    for (const auto& row : table.rows) CHECK(row[1] == "1");

    CHECK(run("simulate --out sim_again.csv") == 0);
    CHECK(same_bytes("sim.csv", "sim_again.csv"));

    CHECK(run("simulate --seed 77 --out sim77.csv") == 0);
    CHECK(!same_bytes("sim.csv", "sim77.csv"));

    CHECK(run("simulate --n-pool 100 --n-obs 300 --out bad.csv") == 1);
    CHECK(run("simulate") == 1);                      // missing --out
    CHECK(run("simulate --lambda -1 --out bad.csv") == 1);
}

void test_fit() {
    CHECK(run("fit --out-draws d.csv --out-summary s.csv") == 1);  // missing --data
    CHECK(run("fit --data missing.csv --out-draws d.csv --out-summary s.csv") == 2);
    CHECK(run("fit --data sim.csv --chains 1 --out-draws d.csv --out-summary s.csv") == 1);
    CHECK(run("fit --data sim.csv --prior-preset bogus --out-draws d.csv --out-summary s.csv") == 1);

    const std::string flags =
        "fit --data sim.csv --chains 2 --warmup 300 --draws 300 --seed 11 "
        "--out-draws draws.csv --out-summary summary.csv";
    CHECK(run(flags) == 0);
    const auto draws = explogi::read_csv("draws.csv");
    CHECK(draws.columns ==
          (std::vector<std::string>{"chain", "iter", "lambda", "mu_bias", "sigma_bias"}));
    CHECK(draws.rows.size() == 600);
    const auto summary = explogi::read_csv("summary.csv");
    CHECK(summary.columns ==
          (std::vector<std::string>{"parameter", "median", "q2.5", "q97.5", "mean", "rhat", "ess"}));
    CHECK(summary.rows.size() == 3);
    CHECK(summary.rows[0][0] == "lambda");

    // reasonable recovery even in the reduced configuration
    const double lambda_median = explogi::parse_double_field(summary.rows[0][1], 2, "median");
    CHECK(lambda_median > 0.25);
    CHECK(lambda_median < 1.0);

    CHECK(run("fit --data sim.csv --chains 2 --warmup 300 --draws 300 --seed 11 "
              "--out-draws draws_b.csv --out-summary summary_b.csv") == 0);
    CHECK(same_bytes("draws.csv", "draws_b.csv"));
    CHECK(same_bytes("summary.csv", "summary_b.csv"));

    // the wide prior preset is accepted and changes the fit
    CHECK(run("fit --data sim.csv --chains 2 --warmup 300 --draws 300 --seed 11 "
              "--prior-preset eq4 --out-draws draws_eq4.csv --out-summary summary_eq4.csv") == 0);
    CHECK(!same_bytes("draws.csv", "draws_eq4.csv"));

    // weighted fit accepts a weight column
    write_file("weighted.csv", "dv,wgt\n2.0,3\n3.1,2\n4.7,1\n6.0,2\n8.5,1\n");
    CHECK(run("fit --data weighted.csv --value-col dv --weight-col wgt --chains 2 --warmup 200 "
              "--draws 100 --out-draws dw.csv --out-summary sw.csv") == 0);
}

void test_impute() {
    CHECK(run("impute --data sim.csv --out-prefix imp") == 1);  // missing --draws
    CHECK(run("impute --data sim.csv --draws draws.csv --mode multiple --m 5 --out-prefix imp") == 0);
    for (int r = 1; r <= 5; ++r) CHECK(fs::exists("imp_" + std::to_string(r) + ".csv"));
    CHECK(!fs::exists("imp_6.csv"));

    // replicas share the observed block byte-for-byte (up to the draw_id column)
    const auto rep1 = explogi::read_csv("imp_1.csv");
    const auto rep2 = explogi::read_csv("imp_2.csv");
    CHECK(rep1.columns == (std::vector<std::string>{"value", "weight", "origin", "draw_id"}));
    for (std::size_t i = 0; i < 250; ++i) {
        CHECK(rep1.rows[i][0] == rep2.rows[i][0]);
        CHECK(rep1.rows[i][1] == rep2.rows[i][1]);
        CHECK(rep1.rows[i][2] == "observed");
        CHECK(rep2.rows[i][2] == "observed");
    }

    // manifest is a flat key-value file whose n_new matches its own k
    const std::string manifest = slurp("imp_manifest.txt");
    CHECK(manifest.find("mode = multiple") != std::string::npos);
    double total_weight = 0.0;
    std::vector<double> ks;
    std::vector<long> n_news;
    std::istringstream lines(manifest);
    std::string line;
    while (std::getline(lines, line)) {
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq), value = line.substr(eq + 3);
        if (key == "total_weight") total_weight = std::stod(value);
        if (key.size() > 2 && key.substr(key.size() - 2) == "_k") ks.push_back(std::stod(value));
        if (key.size() > 6 && key.substr(key.size() - 6) == "_n_new") n_news.push_back(std::stol(value));
    }
    CHECK(total_weight == 250.0);
    CHECK(ks.size() == 5);
    CHECK(n_news.size() == 5);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const double expected = total_weight * (1.0 - ks[i]) / ks[i];
        CHECK(std::abs(static_cast<double>(n_news[i]) - expected) <= 0.5 + 1e-9);
    }

    CHECK(run("impute --data sim.csv --draws draws.csv --mode average --out-prefix avg") == 0);
    CHECK(fs::exists("avg_average.csv"));
    CHECK(!fs::exists("avg_1.csv"));
    CHECK(slurp("avg_manifest.txt").find("mode = average") != std::string::npos);

    // deterministic given identical flags
    CHECK(run("impute --data sim.csv --draws draws.csv --mode multiple --m 3 --seed 9 "
              "--out-prefix da") == 0);
    CHECK(run("impute --data sim.csv --draws draws.csv --mode multiple --m 3 --seed 9 "
              "--out-prefix db") == 0);
    for (int r = 1; r <= 3; ++r)
        CHECK(same_bytes("da_" + std::to_string(r) + ".csv", "db_" + std::to_string(r) + ".csv"));

    // draws/request mismatch and numerically impossible parameters
    CHECK(run("impute --data sim.csv --draws draws.csv --m 100000 --out-prefix bad") == 2);
    write_file("absurd_draws.csv",
               "chain,iter,lambda,mu_bias,sigma_bias\n0,0,1,1e8,0.1\n0,1,1,1e8,0.1\n");
    CHECK(run("impute --data sim.csv --draws absurd_draws.csv --m 2 --out-prefix bad") == 3);
    write_file("broken_draws.csv", "chain,iter,lambda\n0,0,1\n");
    CHECK(run("impute --data sim.csv --draws broken_draws.csv --m 1 --out-prefix bad") == 2);
}

void test_ppc() {
    CHECK(run("ppc --out ppc.csv") == 1);  // missing --draws
    CHECK(run("ppc --draws draws.csv --data sim.csv --curves 4 --out ppc.csv") == 0);
    const auto table = explogi::read_csv("ppc.csv");
    CHECK(table.columns == (std::vector<std::string>{"draw_id", "x", "explogistic_pdf",
                                                     "exponential_pdf", "logistic_cdf"}));
    CHECK(table.rows.size() == 4 * 512);
    CHECK(run("ppc --draws draws.csv --data sim.csv --curves 4 --out ppc_b.csv") == 0);
    CHECK(same_bytes("ppc.csv", "ppc_b.csv"));
    CHECK(run("ppc --draws draws.csv --curves 100000 --out ppc_bad.csv") == 2);
}

void test_ciss_filter() {
    write_file("gv.csv",
               "CASEID,VEHNO,BODYCAT,CRASHCONF,DVTOTAL,CASEWGT\n"
               "c1,1,2,D,12.5,100\n"
               "c2,1,7,D,8,50\n"
               "c3,1,3,D,999,70\n"
               "c4,1,3,D,9.5,80\n"
               "c4,2,3,D,11,60\n");
    write_file("occ.csv",
               "CASEID,VEHNO,MAIS\n"
               "c1,1,0\n"
               "c2,1,0\n"
               "c3,1,0\n"
               "c4,1,0\n"
               "c4,2,2\n");
    CHECK(run("ciss-filter --gv gv.csv --occ occ.csv --out filtered.csv") == 0);
    auto sample = explogi::read_pipeline_sample("filtered.csv");
    CHECK(sample.size() == 2);  // c1 and c4 vehicle 1
    CHECK(sample.records[0].value == 12.5);
    CHECK(sample.records[1].value == 9.5);

    CHECK(run("ciss-filter --gv gv.csv --occ occ.csv --strict-case --out strict.csv") == 0);
    sample = explogi::read_pipeline_sample("strict.csv");
    CHECK(sample.size() == 1);  // c4 vehicle 1 excluded by the injury in vehicle 2

    CHECK(run("ciss-filter --gv missing.csv --occ occ.csv --out f.csv") == 2);
    write_file("gv_short.csv", "CASEID,VEHNO\nc1,1\n");
    CHECK(run("ciss-filter --gv gv_short.csv --occ occ.csv --out f.csv") == 2);

    // the filter output feeds the fit directly
    write_file("gv_many.csv", [] {
        std::string s = "CASEID,VEHNO,BODYCAT,CRASHCONF,DVTOTAL,CASEWGT\n";
        for (int i = 0; i < 40; ++i)
            s += "k" + std::to_string(i) + ",1,2,D," + std::to_string(5 + i % 17) + ",10\n";
        return s;
    }());
    write_file("occ_many.csv", [] {
        std::string s = "CASEID,VEHNO,MAIS\n";
        for (int i = 0; i < 40; ++i) s += "k" + std::to_string(i) + ",1,0\n";
        return s;
    }());
    CHECK(run("ciss-filter --gv gv_many.csv --occ occ_many.csv --out chain_in.csv") == 0);
    CHECK(run("fit --data chain_in.csv --weight-col weight --chains 2 --warmup 200 --draws 100 "
              "--out-draws cd.csv --out-summary cs.csv") == 0);
}

void test_input_files_untouched() {
    const std::string before = slurp("sim.csv");
    CHECK(run("fit --data sim.csv --chains 2 --warmup 100 --draws 50 --out-draws t1.csv "
              "--out-summary t2.csv") == 0);
    CHECK(slurp("sim.csv") == before);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: test_cli <path-to-cli-binary>\n";
        return 2;
    }
    g_cli = fs::absolute(argv[1]).string();

    std::error_code ec;
    fs::remove_all("cli_test_tmp", ec);
    fs::create_directories("cli_test_tmp");
    fs::current_path("cli_test_tmp");

    test_simulate();
    test_fit();
    test_impute();
    test_ppc();
    test_ciss_filter();
    test_input_files_untouched();

    if (g_failures == 0) {
        std::cout << "test_cli: all checks passed\n";
        return 0;
    }
    std::cerr << "test_cli: " << g_failures << " check(s) failed\n";
    return 1;
}
