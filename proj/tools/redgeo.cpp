#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "redgeo/experiment.hpp"
#include "redgeo/io.hpp"
#include "redgeo/lgeo.hpp"

using namespace redgeo;

namespace {

int emit(const RunResult& r) {
    for (const auto& m : r.messages) std::cout << m << "\n";
    for (const auto& o : r.outputs) std::cout << "wrote " << o << "\n";
    return r.exit_code;
}

int run_with(ExperimentConfig cfg, std::initializer_list<const char*> quantities) {
    cfg.quantities.clear();
    for (const char* q : quantities) cfg.quantities.emplace_back(q);
    return emit(run_experiment(cfg));
}

Route parse_route(const std::string& s) {
    if (s == "auto" || s == "automatic") return Route::automatic;
    if (s == "closed-form") return Route::closed_form;
    if (s == "conformal") return Route::conformal;
    if (s == "variational") return Route::variational;
    throw CLI::ValidationError("route", "unknown route '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"local reduced-geometry functionals on symmetry-reduced ancient flows"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string config_path;
    std::string route_name = "auto";
    std::string ell_out = "field.csv";

    if (const char* env = std::getenv("REDGEO_THREADS")) cfg.threads = std::atoi(env);

    app.add_option("--config", config_path, "JSON config; flags override individual fields");
    app.add_option("--threads", cfg.threads, "worker thread cap (env REDGEO_THREADS)");
    app.add_option("--model", cfg.model, "model descriptor, e.g. cone:c=0.5,base=2");
    app.add_option("--weight", cfg.weight, "weight descriptor, e.g. const:c=1");
    app.add_option("--tau-min", cfg.tau_min, "curve grid lower tau");
    app.add_option("--tau-max", cfg.tau_max, "curve grid upper tau");
    app.add_option("--r-min", cfg.r_min, "curve grid lower r");
    app.add_option("--r-max", cfg.r_max, "curve grid upper r");
    app.add_option("--per-decade", cfg.per_decade, "geometric grid density (>= 8)");
    app.add_option("--segments", cfg.segments, "variational path segments");
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_flag("--allow-flagged", cfg.allow_flagged, "use uncertified weights, flagged");

    auto* sc_model = app.add_subcommand("model", "model catalog operations");
    sc_model->add_subcommand("list", "print the model catalog");

    auto* sc_ell = app.add_subcommand("ell", "export the reduced-distance field as CSV");
    sc_ell->add_option("--route", route_name, "auto|closed-form|conformal|variational");
    sc_ell->add_option("--field-out", ell_out, "output CSV file name");
    int nx = 65;
    sc_ell->add_option("--nx", nx, "spatial nodes");

    app.add_subcommand("rv", "reduced volume curve over tau");
    app.add_subcommand("local-i", "local average I(r) curve, both integrand forms");
    app.add_subcommand("local-j", "local boundary average J(r) curve");
    app.add_subcommand("ij-check", "verify the I-J integral relation");
    app.add_subcommand("limits", "extrapolated large-argument limits as JSON");
    app.add_subcommand("certify", "weak-form subsolution certification of the weight");
    app.add_subcommand("density", "soliton density of the model, closed catalog only");
    app.add_subcommand("checks", "structural flow checks (super Ricci, trace, structure)");

    auto* sc_suite = app.add_subcommand("suite", "test suites");
    auto* sc_acc = sc_suite->add_subcommand("acceptance", "run every acceptance criterion");

    for (auto* sub : app.get_subcommands({})) {
        sub->fallthrough();
        for (auto* nested : sub->get_subcommands({})) nested->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw std::runtime_error("cannot read config " + config_path);
            std::stringstream ss;
            ss << f.rdbuf();
            ExperimentConfig file_cfg = ExperimentConfig::from_json(ss.str());
            // flags given on the command line win over the file
            auto keep = [&app](const char* flag) { return app.count(flag) > 0; };
            if (!keep("--model")) cfg.model = file_cfg.model;
            if (!keep("--weight")) cfg.weight = file_cfg.weight;
            if (!keep("--tau-min")) cfg.tau_min = file_cfg.tau_min;
            if (!keep("--tau-max")) cfg.tau_max = file_cfg.tau_max;
            if (!keep("--r-min")) cfg.r_min = file_cfg.r_min;
            if (!keep("--r-max")) cfg.r_max = file_cfg.r_max;
            if (!keep("--per-decade")) cfg.per_decade = file_cfg.per_decade;
            if (!keep("--segments")) cfg.segments = file_cfg.segments;
            if (!keep("--out")) cfg.out_dir = file_cfg.out_dir;
            if (!keep("--allow-flagged")) cfg.allow_flagged = file_cfg.allow_flagged;
            if (!keep("--threads")) cfg.threads = file_cfg.threads;
            cfg.n_space = file_cfg.n_space;
            cfg.n_tau = file_cfg.n_tau;
            if (cfg.quantities.empty()) cfg.quantities = file_cfg.quantities;
        }

        if (app.got_subcommand("model")) {
            for (const auto& name : catalog()) std::cout << name << "\n";
            return 0;
        }
        if (app.got_subcommand("ell")) {
            set_thread_cap(cfg.threads);
            const FlowModel m = make_model(cfg.model);
            FieldSpec fs;
            fs.tau_min = cfg.tau_min;
            fs.tau_max = cfg.tau_max;
            fs.per_decade = cfg.per_decade;
            fs.nx = nx;
            fs.route = parse_route(route_name);
            fs.segments = cfg.segments;
            const ReducedDistanceField field = build_field(m, fs);
            std::filesystem::create_directories(cfg.out_dir);
            const std::string path = cfg.out_dir + "/" + ell_out;
            io::write_field_csv(path, field, cfg.hash());
            std::cout << "wrote " << path << "\n";
            return 0;
        }
        if (app.got_subcommand("rv")) return run_with(cfg, {"rv_curve"});
        if (app.got_subcommand("local-i")) return run_with(cfg, {"i_curve"});
        if (app.got_subcommand("local-j")) return run_with(cfg, {"j_curve"});
        if (app.got_subcommand("ij-check")) return run_with(cfg, {"i_curve", "j_curve", "ij_check"});
        if (app.got_subcommand("limits")) return run_with(cfg, {"rv_curve", "i_curve", "limits"});
        if (app.got_subcommand("certify")) return run_with(cfg, {"certify"});
        if (app.got_subcommand("density")) return run_with(cfg, {"density"});
        if (app.got_subcommand("checks")) return run_with(cfg, {"checks"});
        if (app.got_subcommand("suite") && sc_acc->parsed()) {
            set_thread_cap(cfg.threads);
            bool all = true;
            for (const auto& r : acceptance::run_all()) {
                std::printf("criterion %2d [%s]: %s (%.1fs) %s\n", r.index,
                            r.name.c_str(), r.pass ? "PASS" : "FAIL", r.seconds,
                            r.detail.c_str());
                all = all && r.pass;
            }
            return all ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
