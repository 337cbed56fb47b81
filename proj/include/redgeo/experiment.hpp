#pragma once

#include <string>
#include <vector>

#include "redgeo/functionals.hpp"
#include "redgeo/model.hpp"
#include "redgeo/weight.hpp"

namespace redgeo {

// One reproducible run: a model, a weight, grids, and a quantity list.
// All algorithms are deterministic; the config hash identifies the outputs.
struct ExperimentConfig {
    std::string model = "gaussian:n=2";
    std::string weight = "const:c=1";
    double tau_min = 0.01;
    double tau_max = 100.0;
    double r_min = 0.1;
    double r_max = 10.0;
    int per_decade = 8;
    int segments = 64;     // variational path nodes
    int n_space = 600;     // spatial quadrature intervals
    int n_tau = 512;       // tau quadrature intervals over E_r
    std::vector<std::string> quantities;  // rv_curve i_curve j_curve ij_check limits certify checks density
    std::string out_dir = ".";
    bool allow_flagged = false;
    int threads = 0;  // 0 = library default

    std::string canonical_json() const;
    std::string hash() const;

    static ExperimentConfig from_json(const std::string& text);
};

// const:c= | heat-kernel:tau0=,x0= | localization:rho= | negative-control |
// min-const-heat:c=,tau0=
Weight make_weight(const std::string& descriptor, const FlowModel& m);

struct RunResult {
    int exit_code = 0;  // 0 ok, 1 config error, 2 flagged violation
    std::vector<std::string> outputs;   // files written
    std::vector<std::string> messages;  // human-readable log lines
};

RunResult run_experiment(const ExperimentConfig& config);

void set_thread_cap(int threads);  // 0 = leave as is

namespace acceptance {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

std::vector<CriterionResult> run_all();

}  // namespace acceptance

}  // namespace redgeo
