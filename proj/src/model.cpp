#include "redgeo/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "redgeo/quadrature.hpp"

namespace redgeo {

namespace {

const Fn2 kZero2 = [](double, double) { return 0.0; };
const FnTau kOne = [](double) { return 1.0; };
const FnTau kZero1 = [](double) { return 0.0; };
const FnTau kTinyPositive = [](double) { return 1e-12; };

double nonuniform_dfdt(double fm, double f0, double fp, double tm, double t0, double tp) {
    const double hl = t0 - tm, hr = tp - t0;
    const double dl = (f0 - fm) / hl, dr = (fp - f0) / hr;
    return (hl * dr + hr * dl) / (hl + hr);
}

FlowModel make_gaussian(int n) {
    if (n < 1) throw std::invalid_argument("gaussian: need n >= 1");
    FlowModel m;
    m.name = "gaussian:n=" + std::to_string(n);
    m.kind = Kind::gaussian;
    m.n = n;
    m.a = kOne;
    m.a_prime = kZero1;
    m.trace_h = kZero2;
    m.trace_h_dtau = kZero2;
    m.div_h = kZero2;
    m.h_norm = kZero2;
    m.c1_control = kTinyPositive;
    m.super_ricci_gap = kZero2;
    const double sigma = unit_sphere_area(n - 1);
    m.vol_element = [sigma, n](double x, double) { return sigma * std::pow(x, n - 1); };
    m.metric_scale = kOne;
    return m;
}

FlowModel make_cone(double c, double base) {
    if (!(c > 0.0) || c > 1.0) throw std::invalid_argument("cone: need slope c in (0, 1]");
    if (base < 0.0) throw std::invalid_argument("cone: base offset must be >= 0");
    FlowModel m;
    std::ostringstream nm;
    nm << "cone:c=" << c;
    if (base > 0.0) nm << ",base=" << base;
    m.name = nm.str();
    m.kind = Kind::static_warped;
    m.n = 2;
    m.base_offset = base;
    m.a = kOne;
    m.a_prime = kZero1;
    m.warp = [c](double r) { return c * r + (1.0 - c) * (1.0 - std::exp(-r)); };
    m.warp_d1 = [c](double r) { return c + (1.0 - c) * std::exp(-r); };
    m.warp_d2 = [c](double r) { return -(1.0 - c) * std::exp(-r); };
    m.trace_h = kZero2;
    m.trace_h_dtau = kZero2;
    m.div_h = kZero2;
    m.h_norm = kZero2;
    m.c1_control = kTinyPositive;
    // Gauss curvature -phi''/phi >= 0, so dg/dtau - 2 Ric = -2 Ric <= 0.
    auto warp = m.warp;
    auto warp_d2 = m.warp_d2;
    m.super_ricci_gap = [warp, warp_d2, base](double x, double) {
        // -2 K_Gauss(rho); K_Gauss is decreasing, so rho = x + base bounds the
        // gap from above over the ring of points at chart coordinate x.
        const double rho = std::max(x + base, 1e-8);
        return 2.0 * warp_d2(rho) / warp(rho);
    };
    m.metric_scale = kOne;
    if (base == 0.0) {
        auto w = m.warp;
        m.vol_element = [w](double x, double) { return 2.0 * M_PI * w(x); };
    }
    return m;
}

FlowModel make_conformal_sphere(int n, double growth, const std::string& name) {
    // g(tau) = a(tau) g0 with g0 the unit round S^n and a(tau) = 1 + growth*tau.
    FlowModel m;
    m.name = name;
    m.n = n;
    m.coord_max = M_PI;
    auto a = [growth](double tau) { return 1.0 + growth * tau; };
    m.a = a;
    m.a_prime = [growth](double) { return growth; };
    const double hn = 0.5 * growth * std::sqrt(static_cast<double>(n));  // |h| * a
    m.trace_h = [a, n, growth](double, double tau) { return 0.5 * growth * n / a(tau); };
    m.trace_h_dtau = [a, n, growth](double, double tau) {
        const double at = a(tau);
        return -0.5 * growth * growth * n / (at * at);
    };
    m.div_h = kZero2;
    m.h_norm = [a, hn](double, double tau) { return hn / a(tau); };
    m.c1_control = [hn](double) { return hn + 1e-12; };
    m.super_ricci_gap = [a, n, growth](double, double tau) {
        return (growth - 2.0 * (n - 1)) / a(tau);
    };
    const double sigma = unit_sphere_area(n - 1);
    m.vol_element = [a, sigma, n](double x, double tau) {
        return std::pow(a(tau), 0.5 * n) * sigma * std::pow(std::sin(x), n - 1);
    };
    m.metric_scale = [a](double tau) { return std::sqrt(a(tau)); };
    return m;
}

FlowModel make_sphere(int n) {
    if (n < 2) throw std::invalid_argument("sphere: need n >= 2");
    FlowModel m = make_conformal_sphere(n, 2.0 * (n - 1), "sphere:n=" + std::to_string(n));
    m.kind = Kind::conformal_round;
    return m;
}

FlowModel make_scaled_super(double C) {
    // g(tau) = (1 + 2 C tau) g0 on the unit round S^2; h = C g0.
    // Requires Ric(g0) = g0 >= C g0, i.e. C <= 1, and C > 0 for an ancient flow.
    if (!(C > 0.0) || C > 1.0)
        throw std::invalid_argument("scaled-super: need C in (0, 1] (Ric(S^2) >= C g0)");
    std::ostringstream nm;
    nm << "scaled-super:C=" << C;
    FlowModel m = make_conformal_sphere(2, 2.0 * C, nm.str());
    m.kind = Kind::scaled_super;
    return m;
}

FlowModel make_s2xr() {
    FlowModel m;
    m.name = "s2xr";
    m.kind = Kind::product;
    m.n = 3;
    m.factors.push_back(make_sphere(2));
    m.factors.push_back(make_gaussian(1));
    auto fs = m.factors;
    m.a = kOne;
    m.a_prime = kZero1;
    m.trace_h = [fs](double q, double tau) {
        double s = 0.0;
        for (const auto& f : fs) s += f.trace_h(q, tau);
        return s;
    };
    m.trace_h_dtau = [fs](double q, double tau) {
        double s = 0.0;
        for (const auto& f : fs) s += f.trace_h_dtau(q, tau);
        return s;
    };
    m.div_h = kZero2;
    m.h_norm = [fs](double q, double tau) {
        double s = 0.0;
        for (const auto& f : fs) {
            const double h = f.h_norm(q, tau);
            s += h * h;
        }
        return std::sqrt(s);
    };
    m.c1_control = [fs](double tau) {
        double s = 0.0;
        for (const auto& f : fs) s += f.c1_control(tau);
        return s;
    };
    m.super_ricci_gap = [fs](double q, double tau) {
        double g = -std::numeric_limits<double>::infinity();
        for (const auto& f : fs) g = std::max(g, f.super_ricci_gap(q, tau));
        return g;
    };
    m.metric_scale = kOne;
    return m;
}

}  // namespace

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::gaussian: return "gaussian";
        case Kind::static_warped: return "static_warped";
        case Kind::conformal_round: return "conformal_round";
        case Kind::scaled_super: return "scaled_super";
        case Kind::product: return "product";
    }
    return "?";
}

ModelSpec parse_model_spec(const std::string& descriptor) {
    ModelSpec spec;
    const auto colon = descriptor.find(':');
    spec.name = descriptor.substr(0, colon);
    if (colon != std::string::npos) {
        std::stringstream ss(descriptor.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("model descriptor: expected k=v in '" + item + "'");
            spec.params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        }
    }
    return spec;
}

FlowModel make_model(const ModelSpec& spec) {
    auto get = [&spec](const std::string& key, double fallback) {
        auto it = spec.params.find(key);
        return it == spec.params.end() ? fallback : it->second;
    };
    if (spec.name == "gaussian") return make_gaussian(static_cast<int>(get("n", 2)));
    if (spec.name == "cone") {
        FlowModel m = make_cone(get("c", 0.5), get("base", 0.0));
        if (m.base_offset > 0.0) {
            const double smax = get("smax", 450.0);
            const int nrho = static_cast<int>(get("nrho", 0));
            const int ntheta = static_cast<int>(get("ntheta", 640));
            const int bins = static_cast<int>(get("bins", 4000));
            const int nr = nrho > 0 ? nrho : static_cast<int>((m.base_offset + smax) / 0.08);
            m.profile = build_warped_profile(m.warp, m.base_offset, smax, nr, ntheta, bins);
            auto prof = m.profile;
            m.vol_element = [prof](double x, double) { return prof->area_at(x); };
        }
        return m;
    }
    if (spec.name == "sphere") return make_sphere(static_cast<int>(get("n", 2)));
    if (spec.name == "scaled-super") return make_scaled_super(get("C", 0.5));
    if (spec.name == "s2xr") return make_s2xr();
    throw std::invalid_argument("unknown model '" + spec.name + "'");
}

FlowModel make_model(const std::string& descriptor) {
    return make_model(parse_model_spec(descriptor));
}

std::vector<std::string> catalog() {
    return {"gaussian:n=1", "gaussian:n=2", "gaussian:n=3", "cone:c=0.5", "cone:c=0.9",
            "sphere:n=2",   "sphere:n=3",   "scaled-super:C=0.5", "s2xr"};
}

SampleGrid default_sample_grid(const FlowModel& m) {
    SampleGrid g;
    const double hi = std::min(m.coord_max * 0.95, 10.0);
    g.coord = linspace(hi / 24.0, hi, 24);
    g.tau = geometric_grid(0.01, 100.0, 16);
    return g;
}

ResidualReport check_super_ricci(const FlowModel& m, const SampleGrid& g, double tol) {
    ResidualReport rep;
    rep.max_residual = -std::numeric_limits<double>::infinity();
    for (double tau : g.tau)
        for (double x : g.coord)
            rep.max_residual = std::max(rep.max_residual, m.super_ricci_gap(x, tau));
    rep.pass = rep.max_residual <= tol;
    rep.detail = "max eigenvalue of (dg/dtau - 2 Ric)";
    return rep;
}

AssumptionReport check_assumption(const FlowModel& m, const SampleGrid& g, double tol) {
    if (g.tau.size() < 5 || g.coord.size() < 5)
        throw std::invalid_argument("check_assumption: grid too coarse for the stencil");
    AssumptionReport rep;
    const double hx = g.coord[1] - g.coord[0];
    for (size_t it = 1; it + 1 < g.tau.size(); ++it) {
        const double tau = g.tau[it];
        const double msc = m.metric_scale(tau);
        for (size_t ix = 1; ix + 1 < g.coord.size(); ++ix) {
            const double x = g.coord[ix];
            const double Hm = m.trace_h(g.coord[ix - 1], tau);
            const double H0 = m.trace_h(x, tau);
            const double Hp = m.trace_h(g.coord[ix + 1], tau);
            // grad H in g(tau); div h from the model (isotropic h has div h = 0).
            const double gradH = (Hp - Hm) / (2.0 * hx * msc);
            rep.bianchi_residual =
                std::max(rep.bianchi_residual, std::abs(2.0 * m.div_h(x, tau) - gradH));

            double dH_dtau;
            if (m.trace_h_dtau) {
                dH_dtau = m.trace_h_dtau(x, tau);
            } else {
                dH_dtau = nonuniform_dfdt(m.trace_h(x, g.tau[it - 1]), H0,
                                          m.trace_h(x, g.tau[it + 1]), g.tau[it - 1], tau,
                                          g.tau[it + 1]);
            }
            const double wm = m.vol_element(0.5 * (g.coord[ix - 1] + x), tau);
            const double wp = m.vol_element(0.5 * (x + g.coord[ix + 1]), tau);
            const double wc = m.vol_element(x, tau);
            const double lapH = (wp * (Hp - H0) - wm * (H0 - Hm)) / (wc * hx * hx * msc * msc);
            const double hn = m.h_norm(x, tau);
            rep.heat_like_residual =
                std::max(rep.heat_like_residual, std::max(0.0, dH_dtau + lapH + 2.0 * hn * hn));
        }
    }
    rep.pass = rep.bianchi_residual <= tol && rep.heat_like_residual <= tol;
    rep.detail = "second Bianchi + heat-like relation residuals";
    return rep;
}

ResidualReport check_trace_nonnegative(const FlowModel& m, const SampleGrid& g, double tol) {
    ResidualReport rep;
    for (double tau : g.tau)
        for (double x : g.coord)
            rep.max_residual = std::max(rep.max_residual, -m.trace_h(x, tau));
    rep.pass = rep.max_residual <= tol;
    rep.detail = "max of (-H) over samples";
    return rep;
}

double distance(const FlowModel& m, double q1, double q2, double tau) {
    if (m.kind == Kind::product)
        throw std::invalid_argument("distance: use distance_product for product models");
    double d0 = std::abs(q1 - q2);
    if (m.is_conformal()) d0 = std::min(d0, 2.0 * M_PI - d0);
    return m.metric_scale(tau) * d0;
}

double distance_product(const FlowModel& m, const std::vector<double>& q1,
                        const std::vector<double>& q2, double tau) {
    if (m.kind != Kind::product) throw std::invalid_argument("distance_product: not a product");
    if (q1.size() != m.factors.size() || q2.size() != m.factors.size())
        throw std::invalid_argument("distance_product: coordinate arity mismatch");
    double s = 0.0;
    for (size_t i = 0; i < m.factors.size(); ++i) {
        const double d = distance(m.factors[i], q1[i], q2[i], tau);
        s += d * d;
    }
    return std::sqrt(s);
}

double ball_volume(const FlowModel& m, double s) {
    if (!m.is_static()) throw std::invalid_argument("ball_volume: static models only");
    if (s <= 0.0) return 0.0;
    if (m.kind == Kind::gaussian) return unit_ball_volume(m.n) * std::pow(s, m.n);
    if (m.off_axis()) return m.profile->volume_at(s);
    auto w = m.warp;
    const int pts = std::max(64, static_cast<int>(64 * s));
    return 2.0 * M_PI * integrate_simpson([&w](double u) { return w(u); }, 0.0, s, pts);
}

AvrEstimate asymptotic_volume_ratio(const FlowModel& m, double s_max) {
    AvrEstimate est;
    const double wn = unit_ball_volume(m.n);
    auto ratio = [&](double s) { return ball_volume(m, s) / (wn * std::pow(s, m.n)); };
    const double y2 = ratio(s_max);
    const double y1 = ratio(0.5 * s_max);
    est.ratio_at_smax = y2;
    // tail model y(s) = y_inf + a/s
    const double aa = (y1 - y2) / (2.0 / s_max - 1.0 / s_max);
    est.limit = y2 - aa / s_max;
    est.converged = std::abs(y1 - y2) <= 0.02 * std::max(std::abs(est.limit), 0.05);
    return est;
}

// ---- RadialProfile ---------------------------------------------------------

double RadialProfile::volume_at(double s) const {
    if (s <= s_edges.front()) return 0.0;
    if (s >= s_edges.back()) return cum_mass.back();
    const auto it = std::upper_bound(s_edges.begin(), s_edges.end(), s);
    const size_t k = static_cast<size_t>(it - s_edges.begin()) - 1;
    const double lo = s_edges[k], hi = s_edges[k + 1];
    const double below = k == 0 ? 0.0 : cum_mass[k - 1];
    return below + mass[k] * (s - lo) / (hi - lo);
}

double RadialProfile::area_at(double s) const {
    const int half = 8;
    const double ds = s_edges[1] - s_edges[0];
    const double lo = std::max(s - half * ds, 0.0);
    const double hi = std::min(s + half * ds, s_edges.back());
    if (hi <= lo) return 0.0;
    return (volume_at(hi) - volume_at(lo)) / (hi - lo);
}

}  // namespace redgeo
