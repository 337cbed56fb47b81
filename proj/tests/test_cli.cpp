#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "redgeo/experiment.hpp"
#include "redgeo/io.hpp"

using namespace redgeo;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string cli_path() {
    const char* p = std::getenv("REDGEO_CLI");
    return p ? p : "";
}

int run_cli(const std::string& args) {
    const int rc = std::system((cli_path() + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("config validation errors exit with code 1") {
    ExperimentConfig bad;
    bad.tau_min = 10.0;
    bad.tau_max = 1.0;
    bad.quantities = {"rv_curve"};
    CHECK(run_experiment(bad).exit_code == 1);

    ExperimentConfig coarse;
    coarse.per_decade = 4;
    coarse.quantities = {"rv_curve"};
    CHECK(run_experiment(coarse).exit_code == 1);

    ExperimentConfig unknown;
    unknown.model = "nosuchmodel";
    unknown.quantities = {"rv_curve"};
    CHECK(run_experiment(unknown).exit_code == 1);
}

TEST_CASE("negative control weight yields a flagged exit") {
    ExperimentConfig cfg;
    cfg.model = "gaussian:n=2";
    cfg.weight = "negative-control";
    cfg.quantities = {"certify"};
    cfg.out_dir = "cli_out_neg";
    const RunResult r = run_experiment(cfg);
    CHECK(r.exit_code == 2);
    const std::string doc = slurp("cli_out_neg/certification.json");
    CHECK(doc.find("\"status\": \"flagged\"") != std::string::npos);
    CHECK(doc.find("worst_residual") != std::string::npos);
}

TEST_CASE("uncertified weights need the explicit override") {
    ExperimentConfig cfg;
    cfg.model = "gaussian:n=2";
    cfg.weight = "localization:rho=1";
    cfg.quantities = {"rv_curve"};
    cfg.out_dir = "cli_out_loc";
    CHECK(run_experiment(cfg).exit_code == 2);
    cfg.allow_flagged = true;
    const RunResult r = run_experiment(cfg);
    CHECK(r.exit_code == 0);
    // results produced under the override carry the flag column
    const std::string csv = slurp("cli_out_loc/rv.csv");
    CHECK(csv.find(",1\n") != std::string::npos);
}

TEST_CASE("gaussian rv output is identically one and runs are byte identical") {
    ExperimentConfig cfg;
    cfg.model = "gaussian:n=2";
    cfg.quantities = {"rv_curve"};
    cfg.out_dir = "cli_out_rv";
    REQUIRE(run_experiment(cfg).exit_code == 0);
    const std::string first = slurp("cli_out_rv/rv.csv");
    std::istringstream lines(first);
    std::string line;
    std::getline(lines, line);  // hash comment
    CHECK(line.rfind("# config_hash=", 0) == 0);
    std::getline(lines, line);
    CHECK(line == "tau,value,flag");
    int rows = 0;
    while (std::getline(lines, line)) {
        const auto c1 = line.find(','), c2 = line.rfind(',');
        REQUIRE(c1 != std::string::npos);
        const double v = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
        ++rows;
    }
    CHECK(rows == 33);  // 4 decades at 8 per decade, endpoints included
    REQUIRE(run_experiment(cfg).exit_code == 0);
    CHECK(slurp("cli_out_rv/rv.csv") == first);
}

TEST_CASE("sphere limits report the main equality") {
    ExperimentConfig cfg;
    cfg.model = "sphere:n=2";
    cfg.tau_min = 10.0;
    cfg.tau_max = 1e4;
    cfg.r_min = 20.0;
    cfg.r_max = 2000.0;
    cfg.quantities = {"limits"};
    cfg.out_dir = "cli_out_lim";
    REQUIRE(run_experiment(cfg).exit_code == 0);
    const std::string doc = slurp("cli_out_lim/limits.json");
    CHECK(doc.find("main_equality") != std::string::npos);
    CHECK(doc.find("0.73") != std::string::npos);
}

TEST_CASE("cli binary: subcommands and exit codes") {
    if (cli_path().empty()) return;  // only meaningful under ctest
    CHECK(run_cli("model list") == 0);
    CHECK(run_cli("rv --model gaussian:n=2 --out cli_out_bin") == 0);
    CHECK(run_cli("rv --model nosuchmodel --out cli_out_bin") == 1);
    CHECK(run_cli("certify --model gaussian:n=2 --weight negative-control --out cli_out_bin") ==
          2);
    CHECK(run_cli("density --model sphere:n=2 --out cli_out_bin") == 0);
    CHECK(run_cli("checks --model scaled-super:C=0.5 --out cli_out_bin") == 0);
}
