#include "redgeo/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "redgeo/io.hpp"
#include "redgeo/lgeo.hpp"
#include "redgeo/quadrature.hpp"

namespace redgeo {

void set_thread_cap(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

std::string ExperimentConfig::canonical_json() const {
    nlohmann::ordered_json q = nlohmann::ordered_json::array();
    for (const auto& s : quantities) q.push_back(s);
    nlohmann::ordered_json doc = {
        {"model", model},         {"weight", weight},       {"tau_min", tau_min},
        {"tau_max", tau_max},     {"r_min", r_min},         {"r_max", r_max},
        {"per_decade", per_decade},
        {"segments", segments},   {"n_space", n_space},     {"n_tau", n_tau},
        {"quantities", q},        {"out_dir", out_dir},     {"allow_flagged", allow_flagged},
        {"threads", threads}};
    return doc.dump();
}

std::string ExperimentConfig::hash() const { return io::hash_hex(io::fnv1a(canonical_json())); }

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    ExperimentConfig c;
    auto opt = [&doc](const char* key, auto& field) {
        if (doc.contains(key)) doc.at(key).get_to(field);
    };
    opt("model", c.model);
    opt("weight", c.weight);
    opt("tau_min", c.tau_min);
    opt("tau_max", c.tau_max);
    opt("r_min", c.r_min);
    opt("r_max", c.r_max);
    opt("per_decade", c.per_decade);
    opt("segments", c.segments);
    opt("n_space", c.n_space);
    opt("n_tau", c.n_tau);
    opt("quantities", c.quantities);
    opt("out_dir", c.out_dir);
    opt("allow_flagged", c.allow_flagged);
    opt("threads", c.threads);
    return c;
}

Weight make_weight(const std::string& descriptor, const FlowModel& m) {
    const ModelSpec spec = parse_model_spec(descriptor);
    auto get = [&spec](const std::string& key, double fallback) {
        auto it = spec.params.find(key);
        return it == spec.params.end() ? fallback : it->second;
    };
    if (spec.name == "const" || spec.name == "one") return weight_constant(get("c", 1.0));
    if (spec.name == "heat-kernel")
        return weight_shifted_heat_kernel(m, get("x0", 0.0), get("tau0", 10.0));
    if (spec.name == "localization") return weight_localization(m, get("rho", 1.0));
    if (spec.name == "negative-control") return weight_negative_control(m);
    if (spec.name == "min-const-heat") {
        Weight a = weight_constant(get("c", 0.008));
        Weight b = weight_shifted_heat_kernel(m, 0.0, get("tau0", 8.0));
        return weight_min(a, b);
    }
    throw std::invalid_argument("unknown weight '" + descriptor + "'");
}

namespace {

std::string join_path(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

void validate(const ExperimentConfig& c) {
    if (!(c.tau_min < c.tau_max)) throw std::invalid_argument("tau_min must be < tau_max");
    if (c.per_decade < 8) throw std::invalid_argument("per_decade must be >= 8");
    if (!(c.r_min < c.r_max) || c.r_min <= 0.0) throw std::invalid_argument("bad r range");
    static const std::vector<std::string> known = {"rv_curve", "i_curve",  "j_curve",
                                                   "ij_check", "limits",   "certify",
                                                   "checks",   "density"};
    for (const auto& q : c.quantities)
        if (std::find(known.begin(), known.end(), q) == known.end())
            throw std::invalid_argument("unknown quantity '" + q + "'");
}

bool wants(const ExperimentConfig& c, const std::string& q) {
    return std::find(c.quantities.begin(), c.quantities.end(), q) != c.quantities.end();
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config) {
    RunResult result;
    FlowModel model;
    Weight weight;
    try {
        validate(config);
        set_thread_cap(config.threads);
        model = make_model(config.model);
        weight = make_weight(config.weight, model);
        std::filesystem::create_directories(config.out_dir);
    } catch (const std::exception& e) {
        result.exit_code = 1;
        result.messages.push_back(std::string("config error: ") + e.what());
        return result;
    }

    const std::string hash = config.hash();
    FunctionalOptions opt;
    opt.n_space = config.n_space;
    opt.n_tau = config.n_tau;
    opt.segments = config.segments;

    CertificationReport cert;
    bool certified_now = false;
    if (weight.status == CertStatus::unknown || wants(config, "certify")) {
        try {
            CertifyOptions copt;
            // keep tau samples inside the weight's domain
            copt.tau_samples = geometric_grid(0.05, std::min(5.0, 0.5 * config.tau_max + 0.05), 4);
            cert = certify_subsolution(weight, model, copt);
            certified_now = true;
        } catch (const std::exception& e) {
            result.exit_code = 1;
            result.messages.push_back(std::string("certification error: ") + e.what());
            return result;
        }
    }

    const bool needs_admissible = wants(config, "rv_curve") || wants(config, "i_curve") ||
                                  wants(config, "j_curve") || wants(config, "ij_check") ||
                                  wants(config, "limits");
    if (needs_admissible && !weight.admissible() && !config.allow_flagged) {
        result.exit_code = 2;
        result.messages.push_back("weight '" + weight.id +
                                  "' is not certified; pass --allow-flagged to use it anyway");
        return result;
    }
    const uint8_t weight_flag = weight.admissible() ? 0 : 1;

    try {
        if (wants(config, "checks")) {
            std::vector<const FlowModel*> parts;
            if (model.kind == Kind::product)
                for (const auto& f : model.factors) parts.push_back(&f);
            else
                parts.push_back(&model);
            for (const FlowModel* part : parts) {
                const SampleGrid grid = default_sample_grid(*part);
                const ResidualReport sr = check_super_ricci(*part, grid);
                const AssumptionReport ar = check_assumption(*part, grid);
                const ResidualReport tr = check_trace_nonnegative(*part, grid);
                std::ostringstream msg;
                msg << "checks[" << part->name << "]: super_ricci=" << (sr.pass ? "ok" : "FAIL")
                    << " structure=" << (ar.pass ? "ok" : "FAIL")
                    << " trace_nonneg=" << (tr.pass ? "ok" : "FAIL");
                result.messages.push_back(msg.str());
                if (!sr.pass || !ar.pass || !tr.pass) result.exit_code = 2;
            }
        }

        if (certified_now || wants(config, "certify")) {
            const std::string path = join_path(config.out_dir, "certification.json");
            io::write_text(path, io::certification_json(cert, hash));
            result.outputs.push_back(path);
            result.messages.push_back("certify: " + weight.id + " -> " +
                                      cert_status_name(weight.status));
            if (wants(config, "certify") && !weight.admissible()) result.exit_code = 2;
        }

        MonotoneSeries rv, iP, iA, jS;
        bool have_rv = false, have_i = false, have_j = false;
        auto ensure_rv = [&] {
            if (have_rv) return;
            rv = rv_curve(model, weight, config.tau_min, config.tau_max, config.per_decade, opt);
            for (auto& f : rv.flag) f |= weight_flag;
            have_rv = true;
        };
        auto ensure_i = [&] {
            if (have_i) return;
            iP = i_curve(model, weight, config.r_min, config.r_max, config.per_decade, opt);
            iA = i_curve_alternative(model, weight, config.r_min, config.r_max,
                                     config.per_decade, opt);
            for (auto& f : iP.flag) f |= weight_flag;
            have_i = true;
        };
        auto ensure_j = [&] {
            if (have_j) return;
            jS = j_curve(model, weight, config.r_min, config.r_max, config.per_decade, opt);
            for (auto& f : jS.flag) f |= weight_flag;
            have_j = true;
        };

        if (wants(config, "rv_curve")) {
            ensure_rv();
            const std::string path = join_path(config.out_dir, "rv.csv");
            io::write_rv_csv(path, rv, hash);
            result.outputs.push_back(path);
        }
        if (wants(config, "i_curve")) {
            ensure_i();
            const std::string path = join_path(config.out_dir, "i.csv");
            io::write_i_csv(path, iP, iA, hash);
            result.outputs.push_back(path);
        }
        if (wants(config, "j_curve")) {
            ensure_j();
            const std::string path = join_path(config.out_dir, "j.csv");
            io::write_j_csv(path, jS, hash);
            result.outputs.push_back(path);
        }
        if (wants(config, "ij_check")) {
            ensure_i();
            ensure_j();
            const double res = check_IJ_relation(iP, jS, model.n, weight.phi(0.0, 1e-12));
            std::ostringstream msg;
            msg << "ij_check: max relative residual " << res;
            result.messages.push_back(msg.str());
            if (res > 1e-2) result.exit_code = 2;
        }
        if (wants(config, "limits")) {
            ensure_rv();
            ensure_i();
            const LimitEstimate lv = estimate_limit(rv);
            const LimitEstimate li = estimate_limit(iP);
            std::vector<io::LimitRecord> recs;
            recs.push_back({config.model, weight.id, "rv", lv});
            recs.push_back({config.model, weight.id, "local_i", li});
            LimitEstimate eq;
            eq.value = 0.5 * (lv.value + li.value);
            eq.error = lv.error + li.error;
            eq.exponent = 0.5 * (lv.exponent + li.exponent);
            eq.converged = lv.converged && li.converged &&
                           std::abs(lv.value - li.value) <= lv.error + li.error;
            recs.push_back({config.model, weight.id, "main_equality", eq});
            const std::string path = join_path(config.out_dir, "limits.json");
            io::write_text(path, io::limits_json(recs, hash));
            result.outputs.push_back(path);
            if (!eq.converged) result.exit_code = 2;
        }
        if (wants(config, "density")) {
            const SolitonModel sol = make_soliton(config.model);
            const double theta = gaussian_density(sol);
            nlohmann::ordered_json doc = {{"model", config.model},
                                          {"theta", theta},
                                          {"normalization_residual",
                                           soliton_normalization_residual(sol)},
                                          {"config_hash", hash}};
            const std::string path = join_path(config.out_dir, "density.json");
            io::write_text(path, doc.dump(2) + "\n");
            result.outputs.push_back(path);
            std::ostringstream msg;
            msg << "density: theta(" << config.model << ") = " << theta;
            result.messages.push_back(msg.str());
        }
    } catch (const std::exception& e) {
        result.exit_code = 1;
        result.messages.push_back(std::string("error: ") + e.what());
    }
    return result;
}

// ---- acceptance suite -------------------------------------------------------

namespace acceptance {

namespace {

using clock_type = std::chrono::steady_clock;

struct Check {
    bool ok = true;
    std::ostringstream detail;
};

CriterionResult finish(int index, const std::string& name, const Check& c,
                       clock_type::time_point t0) {
    CriterionResult r;
    r.index = index;
    r.name = name;
    r.pass = c.ok;
    r.detail = c.detail.str();
    r.seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
    return r;
}

CriterionResult c1_gaussian_rv() {
    const auto t0 = clock_type::now();
    Check c;
    const Weight one = weight_constant(1.0);
    double worst_closed = 0.0, worst_var = 0.0;
    for (int n : {1, 2, 3}) {
        const FlowModel m = make_model("gaussian:n=" + std::to_string(n));
        for (double tau : {0.01, 1.0, 100.0}) {
            worst_closed = std::max(worst_closed,
                                    std::abs(reduced_volume(m, one, tau) - 1.0));
            FunctionalOptions vo;
            vo.ell_route = Route::variational;
            vo.n_space = 200;
            worst_var = std::max(worst_var, std::abs(reduced_volume(m, one, tau, vo) - 1.0));
        }
    }
    c.ok = worst_closed <= 1e-6 && worst_var <= 1e-3;
    c.detail << "max |rv-1|: closed " << worst_closed << " (tol 1e-6), variational "
             << worst_var << " (tol 1e-3)";
    return finish(1, "gaussian reduced volume", c, t0);
}

CriterionResult c2_mean_value() {
    const auto t0 = clock_type::now();
    Check c;
    const FlowModel m = make_model("gaussian:n=2");
    Weight one = weight_constant(1.0);
    const MonotoneSeries i1 = i_curve(m, one, 0.1, 10.0, 8);
    double worst1 = 0.0;
    for (double v : i1.value) worst1 = std::max(worst1, std::abs(v - 1.0));

    const double tau0 = 10.0;
    Weight hk = weight_shifted_heat_kernel(m, 0.0, tau0);
    const double base_value = hk.phi(0.0, 0.0);
    const MonotoneSeries i2 = i_curve(m, hk, 0.05, 5.0, 8);
    double worst2 = 0.0;
    for (double v : i2.value)
        worst2 = std::max(worst2, std::abs(v - base_value) / base_value);
    c.ok = worst1 <= 1e-2 && worst2 <= 1e-2;
    c.detail << "max rel err: const weight " << worst1 << ", concentrating weight " << worst2
             << " (tol 1e-2, 2 decades of r)";
    return finish(2, "mean value identity", c, t0);
}

CriterionResult c3_monotonicity() {
    const auto t0 = clock_type::now();
    Check c;
    const Weight one = weight_constant(1.0);
    double worst_rv = 0.0, worst_i = 0.0, worst_j = 0.0;
    std::string bad;
    for (const std::string& desc : catalog()) {
        const FlowModel m = make_model(desc);
        const auto rv = check_monotone(rv_curve(m, one, 0.01, 100.0, 8), 1e-3);
        const auto mi = check_monotone(i_curve(m, one, 0.1, 10.0, 8), 1e-3);
        const auto mj = check_monotone(j_curve(m, one, 0.1, 10.0, 8), 1e-2);
        worst_rv = std::max(worst_rv, rv.worst_rel_increase);
        worst_i = std::max(worst_i, mi.worst_rel_increase);
        worst_j = std::max(worst_j, mj.worst_rel_increase);
        if (!rv.pass || !mi.pass || !mj.pass) {
            c.ok = false;
            bad += (bad.empty() ? "" : ", ") + desc;
        }
    }
    c.detail << "worst per-step rel increase: rv " << worst_rv << " (tol 1e-3), I " << worst_i
             << " (tol 1e-3), J " << worst_j << " (tol 1e-2)";
    if (!bad.empty()) c.detail << "; violations on: " << bad;
    return finish(3, "monotonicity suites", c, t0);
}

CriterionResult c4_ij_relation() {
    const auto t0 = clock_type::now();
    Check c;
    const Weight one = weight_constant(1.0);
    double worst = 0.0;
    for (const std::string& desc : {std::string("cone:c=0.5"), std::string("sphere:n=2")}) {
        const FlowModel m = make_model(desc);
        const MonotoneSeries I = i_curve(m, one, 0.1, 10.0, 12);
        const MonotoneSeries J = j_curve(m, one, 0.1, 10.0, 12);
        const double res = check_IJ_relation(I, J, m.n, 1.0);
        worst = std::max(worst, res);
        c.detail << desc << " residual " << res << "; ";
    }
    c.ok = worst <= 1e-2;
    c.detail << "(tol 1e-2)";
    return finish(4, "I-J integral relation", c, t0);
}

CriterionResult c5_static_identity() {
    const auto t0 = clock_type::now();
    Check c;
    const Weight one = weight_constant(1.0);
    const FlowModel cone = make_model("cone:c=0.5");
    const LimitEstimate lv = estimate_limit(rv_curve(cone, one, 1.0, 1000.0, 8));
    const LimitEstimate li = estimate_limit(i_curve(cone, one, 2.0, 200.0, 8));
    const bool cone_ok = std::abs(lv.value - 0.5) <= 0.02 && std::abs(li.value - 0.5) <= 0.02 &&
                         lv.converged && li.converged;

    const FlowModel flat = make_model("gaussian:n=2");
    FunctionalOptions fine;
    fine.n_tau = 768;
    const MonotoneSeries iflat = i_curve(flat, one, 0.1, 10.0, 8, fine);
    double worst_flat = 0.0;
    for (double v : iflat.value) worst_flat = std::max(worst_flat, std::abs(v - 1.0));

    c.ok = cone_ok && worst_flat <= 1e-3;
    c.detail << "cone limits rv " << lv.value << "+-" << lv.error << ", I " << li.value << "+-"
             << li.error << " (target 0.5+-0.02); flat plane max |I-1| " << worst_flat
             << " (tol 1e-3)";
    return finish(5, "static asymptotic ratio identity", c, t0);
}

CriterionResult c6_main_equality() {
    const auto t0 = clock_type::now();
    Check c;
    const Weight one = weight_constant(1.0);
    const double theta_s2 = 2.0 / std::exp(1.0);

    const FlowModel sph = make_model("sphere:n=2");
    const LimitEstimate lv = estimate_limit(rv_curve(sph, one, 10.0, 1e4, 8));
    const LimitEstimate li = estimate_limit(i_curve(sph, one, 20.0, 2000.0, 8));
    const bool agree = std::abs(lv.value - li.value) <= lv.error + li.error;
    const bool near = std::abs(lv.value - theta_s2) <= 0.05 * theta_s2 &&
                      std::abs(li.value - theta_s2) <= 0.05 * theta_s2;

    const FlowModel ss = make_model("scaled-super:C=0.5");
    const LimitEstimate sv = estimate_limit(rv_curve(ss, one, 10.0, 1e4, 8));
    const LimitEstimate si = estimate_limit(i_curve(ss, one, 20.0, 2000.0, 8));
    const bool agree_ss = std::abs(sv.value - si.value) <= sv.error + si.error;

    c.ok = agree && near && agree_ss;
    c.detail << "sphere: lim rv " << lv.value << "+-" << lv.error << ", lim I " << li.value
             << "+-" << li.error << ", target " << theta_s2 << " (5%); scaled super: rv "
             << sv.value << "+-" << sv.error << " vs I " << si.value << "+-" << si.error;
    return finish(6, "limit equality and soliton density", c, t0);
}

CriterionResult c7_bounds() {
    const auto t0 = clock_type::now();
    Check c;
    double worst_static_gap = 0.0, min_sphere_slack = 0.0, worst_kstar = 0.0, worst_H = 0.0;
    bool all_finite = true;
    for (const std::string& desc : catalog()) {
        const FlowModel m0 = make_model(desc);
        std::vector<const FlowModel*> parts;
        if (m0.kind == Kind::product)
            for (const auto& f : m0.factors) parts.push_back(&f);
        else
            parts.push_back(&m0);
        for (const FlowModel* m : parts) {
            FieldSpec fs;
            fs.tau_min = 0.1;
            fs.tau_max = 100.0;
            fs.per_decade = 8;
            fs.nx = 65;
            const ReducedDistanceField f = build_field(*m, fs);
            for (size_t it = 0; it < f.tau.size(); ++it)
                for (size_t ix = 0; ix < f.x.size(); ++ix) {
                    const double slack =
                        f.ell[f.idx(it, ix)] - ell_lower_bound(*m, f.x[ix], f.tau[it]);
                    if (m->is_static())
                        worst_static_gap = std::max(worst_static_gap, std::abs(slack));
                    else
                        min_sphere_slack = std::min(min_sphere_slack, slack);
                }
            const GradientBoundReport gb = check_gradient_bound(f, *m);
            all_finite = all_finite && gb.finite;
            worst_kstar = std::max(worst_kstar, gb.max_kstar);
            const ResidualReport tr = check_trace_nonnegative(*m, default_sample_grid(*m));
            worst_H = std::max(worst_H, tr.max_residual);
        }
    }
    c.ok = worst_static_gap <= 1e-9 && min_sphere_slack >= -1e-9 && all_finite &&
           worst_H <= 1e-12;
    c.detail << "static lower-bound gap " << worst_static_gap << " (equality); min slack "
             << min_sphere_slack << "; K* finite=" << (all_finite ? "yes" : "no") << " max "
             << worst_kstar << "; worst [-H]+ " << worst_H;
    return finish(7, "lower and gradient bounds", c, t0);
}

CriterionResult c8_product_rule() {
    const auto t0 = clock_type::now();
    Check c;
    const Weight one = weight_constant(1.0);
    const FlowModel prod = make_model("s2xr");
    const FlowModel sph = make_model("sphere:n=2");
    double worst = 0.0;
    for (double tau : {1.0, 10.0, 100.0}) {
        const double vp = reduced_volume(prod, one, tau);
        const double vs = reduced_volume(sph, one, tau);
        worst = std::max(worst, std::abs(vp - vs) / vs);
    }
    c.ok = worst <= 1e-2;
    c.detail << "max rel gap |rv(S2xR) - rv(S2)| " << worst << " (tol 1e-2)";
    return finish(8, "product factorization", c, t0);
}

CriterionResult c9_base_point() {
    const auto t0 = clock_type::now();
    Check c;
    const Weight one = weight_constant(1.0);
    const FlowModel apex = make_model("cone:c=0.5");
    const FlowModel off = make_model("cone:c=0.5,base=2");
    const LimitEstimate va = estimate_limit(rv_curve(apex, one, 1.0, 1000.0, 8));
    const LimitEstimate vb = estimate_limit(rv_curve(off, one, 1.0, 1000.0, 8));
    const LimitEstimate ia = estimate_limit(i_curve(apex, one, 2.0, 200.0, 8));
    const LimitEstimate ib = estimate_limit(i_curve(off, one, 2.0, 200.0, 8));
    const bool rv_ok = std::abs(va.value - vb.value) <= va.error + vb.error;
    const bool i_ok = std::abs(ia.value - ib.value) <= ia.error + ib.error;
    c.ok = rv_ok && i_ok;
    c.detail << "rv: apex " << va.value << "+-" << va.error << " vs offset " << vb.value << "+-"
             << vb.error << "; I: apex " << ia.value << "+-" << ia.error << " vs offset "
             << ib.value << "+-" << ib.error;
    return finish(9, "base point independence", c, t0);
}

CriterionResult c10_certification() {
    const auto t0 = clock_type::now();
    Check c;
    const FlowModel m = make_model("gaussian:n=2");
    CertifyOptions copt;
    copt.tau_samples = geometric_grid(0.05, 5.0, 4);

    Weight one = weight_constant(1.0);
    const CertificationReport r1 = certify_subsolution(one, m, copt);
    Weight mn = make_weight("min-const-heat:c=0.008,tau0=8", m);
    const CertificationReport r2 = certify_subsolution(mn, m, copt);
    Weight neg = weight_negative_control(m);
    const CertificationReport r3 = certify_subsolution(neg, m, copt);

    Weight loc = weight_localization(m, 1.0);
    const CertificationReport r4 = certify_subsolution(loc, m, copt);
    FunctionalOptions opt;
    opt.parallel = true;
    const MonotoneSeries scan = rv_curve(m, loc, 0.5, 50.0, 8, opt);
    const MonotonicityReport mono = check_monotone(scan, 1e-6);
    // the finding: the weak-form verdict and the observed direction must agree
    const bool weak_ok = loc.status != CertStatus::flagged;
    const bool consistent = weak_ok == mono.pass;

    c.ok = one.admissible() && mn.admissible() && neg.status == CertStatus::flagged &&
           r3.worst_residual > 0.0 && consistent;
    c.detail << "const=" << cert_status_name(one.status) << " min=" << cert_status_name(mn.status)
             << " negative-control=" << cert_status_name(neg.status) << " (residual "
             << r3.worst_residual << "); localization finding: weak-form "
             << cert_status_name(loc.status) << " (residual " << r4.worst_residual
             << "), direct scan " << (mono.pass ? "non-increasing" : "increasing")
             << " (worst step " << mono.worst_rel_increase << "), consistent="
             << (consistent ? "yes" : "no");
    (void)r1;
    (void)r2;
    return finish(10, "weight certification engine", c, t0);
}

CriterionResult c11_convergence_order() {
    const auto t0 = clock_type::now();
    Check c;
    const FlowModel m = make_model("sphere:n=2");
    const double q = 2.0, tau_bar = 1.0;
    const double exact = reduced_distance_conformal(m, q, tau_bar);
    std::vector<double> errs;
    for (int N : {16, 32, 64, 128, 256}) {
        VariationalOptions vo;
        vo.segments = N;
        errs.push_back(std::abs(reduced_distance_variational(m, q, tau_bar, vo).ell - exact));
    }
    // least-squares slope of log2(err) against doubling index
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int k = static_cast<int>(errs.size());
    for (int i = 0; i < k; ++i) {
        const double y = std::log2(std::max(errs[i], 1e-16));
        sx += i; sy += y; sxx += i * i; sxy += i * y;
    }
    const double order = -(k * sxy - sx * sy) / (k * sxx - sx * sx);
    c.ok = order >= 1.8;
    c.detail << "errors";
    for (double e : errs) c.detail << " " << e;
    c.detail << "; empirical order " << order << " (need >= 1.8)";
    return finish(11, "path discretization convergence order", c, t0);
}

}  // namespace

std::vector<CriterionResult> run_all() {
    return {c1_gaussian_rv(),  c2_mean_value(),   c3_monotonicity(), c4_ij_relation(),
            c5_static_identity(), c6_main_equality(), c7_bounds(),   c8_product_rule(),
            c9_base_point(),   c10_certification(), c11_convergence_order()};
}

}  // namespace acceptance

}  // namespace redgeo
