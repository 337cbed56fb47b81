#include "redgeo/lgeo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "redgeo/quadrature.hpp"

namespace redgeo {

namespace {

double segment_energy(const FlowModel& m, double s0, double s1, double x0, double x1) {
    const double ds = s1 - s0;
    const double smid = 0.5 * (s0 + s1);
    const double tau_mid = smid * smid;
    const double msc = m.metric_scale(tau_mid);
    const double v = (x1 - x0) / ds;
    return (0.5 * msc * msc * v * v +
            2.0 * smid * smid * m.trace_h(0.5 * (x0 + x1), tau_mid)) * ds;
}

// Golden-section minimization of a unimodal local energy.
template <typename F>
double golden_min(F&& f, double lo, double hi, int iters = 60) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a); f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a); f2 = f(x2);
        }
    }
    return f1 < f2 ? x1 : x2;
}

int conformal_quad_points(double tau_bar) {
    return std::clamp(static_cast<int>(16.0 * std::sqrt(tau_bar)) + 200, 200, 6000);
}

}  // namespace

PathDiscretization straight_path(double p, double q, double tau_bar, int segments) {
    PathDiscretization path;
    path.tau_bar = tau_bar;
    path.pos.resize(segments + 1);
    for (int i = 0; i <= segments; ++i)
        path.pos[i] = p + (q - p) * i / segments;
    return path;
}

double l_length(const FlowModel& m, const PathDiscretization& path) {
    const int N = path.segments();
    if (N < 1) throw std::invalid_argument("l_length: empty path");
    const double sig = std::sqrt(path.tau_bar);
    double L = 0.0;
    for (int i = 0; i < N; ++i)
        L += segment_energy(m, sig * i / N, sig * (i + 1) / N, path.pos[i], path.pos[i + 1]);
    return L;
}

double reduced_distance_closed_form(const FlowModel& m, double q, double tau_bar) {
    if (!m.is_static())
        throw std::invalid_argument("reduced_distance_closed_form: static models only");
    return q * q / (4.0 * tau_bar);
}

double conformal_kinetic_integral(const FlowModel& m, double tau_bar) {
    // int_0^tau 1/(sqrt(s) a(s)) ds = 2 int_0^sqrt(tau) du / a(u^2)
    auto a = m.a;
    return 2.0 * integrate_simpson([&a](double u) { return 1.0 / a(u * u); }, 0.0,
                                   std::sqrt(tau_bar), conformal_quad_points(tau_bar));
}

double conformal_trace_integral(const FlowModel& m, double tau_bar) {
    // int_0^tau sqrt(s) H(s) ds = 2 int_0^sqrt(tau) u^2 H(u^2) du
    const auto& H = m.trace_h;
    return 2.0 * integrate_simpson([&H](double u) { return u * u * H(0.0, u * u); }, 0.0,
                                   std::sqrt(tau_bar), conformal_quad_points(tau_bar));
}

double reduced_distance_conformal(const FlowModel& m, double q, double tau_bar) {
    if (!m.is_conformal() && m.kind != Kind::gaussian)
        throw std::invalid_argument("reduced_distance_conformal: conformal models only");
    if (std::abs(q) > m.coord_max + 1e-12)
        throw std::invalid_argument("reduced_distance_conformal: q beyond the g0 diameter");
    const double A = conformal_kinetic_integral(m, tau_bar);
    const double B = conformal_trace_integral(m, tau_bar);
    return (q * q / A + B) / (2.0 * std::sqrt(tau_bar));
}

double ell_lower_bound(const FlowModel& m, double q, double tau_bar) {
    const double d0 = std::abs(q);  // coordinate is the g(0)-distance from p
    return std::exp(-m.kappa * tau_bar) * d0 * d0 / (4.0 * tau_bar) -
           m.n * m.kappa * tau_bar / 3.0;
}

VariationalResult reduced_distance_variational(const FlowModel& m, double q, double tau_bar,
                                               const VariationalOptions& opt) {
    if (m.kind == Kind::product)
        throw std::invalid_argument("variational: use reduced_distance_product");
    if (opt.segments < 16) throw std::invalid_argument("variational: need >= 16 segments");
    VariationalResult res;
    const double sig = std::sqrt(tau_bar);

    // Node-wise relaxation only damps the high-frequency error efficiently,
    // so the path is solved coarse-to-fine on a doubling hierarchy and each
    // level starts from the interpolated coarser solution.
    std::vector<int> levels{opt.segments};
    while (levels.back() > 24) levels.push_back((levels.back() + 1) / 2);
    std::reverse(levels.begin(), levels.end());

    res.path = straight_path(0.0, q, tau_bar, levels.front());
    for (size_t lev = 0; lev < levels.size(); ++lev) {
        const int N = levels[lev];
        if (lev > 0) {
            // linear interpolation in s onto the finer node set
            const auto coarse = res.path.pos;
            const int Nc = static_cast<int>(coarse.size()) - 1;
            res.path.pos.assign(N + 1, 0.0);
            for (int i = 0; i <= N; ++i) {
                const double t = static_cast<double>(i) * Nc / N;
                const int k = std::min(static_cast<int>(t), Nc - 1);
                res.path.pos[i] = coarse[k] + (t - k) * (coarse[k + 1] - coarse[k]);
            }
        }
        auto seg = [&](int i, double xl, double xr) {
            return segment_energy(m, sig * i / N, sig * (i + 1) / N, xl, xr);
        };
        double L = l_length(m, res.path);
        auto& pos = res.path.pos;
        res.converged = false;
        for (int sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
            const double L_before = L;
            for (int j = 1; j < N; ++j) {
                auto local = [&](double x) {
                    return seg(j - 1, pos[j - 1], x) + seg(j, x, pos[j + 1]);
                };
                const double cur = local(pos[j]);
                const double spread = std::abs(pos[j + 1] - pos[j - 1]);
                const double pad = 0.5 * spread + 0.1 * (std::abs(q) / N + 1e-6);
                const double lo = std::min({pos[j - 1], pos[j + 1], pos[j]}) - pad;
                const double hi = std::max({pos[j - 1], pos[j + 1], pos[j]}) + pad;
                const double cand = golden_min(local, lo, hi);
                const double cnd = local(cand);
                if (cnd < cur) {
                    L -= cur - cnd;
                    pos[j] = cand;
                }
            }
            res.sweeps += 1;
            if (L_before - L <= opt.rel_tol * (std::abs(L_before) + 1e-12)) {
                res.converged = true;
                break;
            }
        }
    }
    res.l_length = l_length(m, res.path);  // re-sum to drop accumulated rounding
    res.ell = res.l_length / (2.0 * sig);
    res.below_lower_bound =
        res.ell < ell_lower_bound(m, q, tau_bar) - 1e-9 * (1.0 + std::abs(res.ell));
    return res;
}

double reduced_distance(const FlowModel& m, double q, double tau_bar, Route route) {
    switch (route) {
        case Route::closed_form: return reduced_distance_closed_form(m, q, tau_bar);
        case Route::conformal: return reduced_distance_conformal(m, q, tau_bar);
        case Route::variational: return reduced_distance_variational(m, q, tau_bar).ell;
        case Route::automatic: break;
    }
    if (m.is_static()) return reduced_distance_closed_form(m, q, tau_bar);
    if (m.is_conformal()) return reduced_distance_conformal(m, q, tau_bar);
    throw std::invalid_argument("reduced_distance: no exact route; use variational");
}

double reduced_distance_product(const FlowModel& m, const std::vector<double>& q,
                                double tau_bar, Route route) {
    if (m.kind != Kind::product)
        throw std::invalid_argument("reduced_distance_product: not a product model");
    if (q.size() != m.factors.size())
        throw std::invalid_argument("reduced_distance_product: coordinate arity mismatch");
    double sum = 0.0;
    for (size_t i = 0; i < m.factors.size(); ++i)
        sum += route == Route::variational
                   ? reduced_distance_variational(m.factors[i], q[i], tau_bar).ell
                   : reduced_distance(m.factors[i], q[i], tau_bar, route);
    return sum;
}

EllDerivs ell_derivs(const FlowModel& m, double q, double tau_bar) {
    EllDerivs d;
    if (m.is_static()) {
        d.ell = q * q / (4.0 * tau_bar);
        d.grad_norm = std::abs(q) / (2.0 * tau_bar);
        d.dtau = -d.ell / tau_bar;
        return d;
    }
    if (m.is_conformal()) {
        const double A = conformal_kinetic_integral(m, tau_bar);
        const double B = conformal_trace_integral(m, tau_bar);
        const double sq = std::sqrt(tau_bar);
        d.ell = (q * q / A + B) / (2.0 * sq);
        d.grad_norm = std::abs(q) / (A * sq * std::sqrt(m.a(tau_bar)));
        const double Ap = 1.0 / (sq * m.a(tau_bar));
        const double Bp = sq * m.trace_h(0.0, tau_bar);
        d.dtau = (-q * q * Ap / (A * A) + Bp) / (2.0 * sq) - d.ell / (2.0 * tau_bar);
        return d;
    }
    throw std::invalid_argument("ell_derivs: no exact route for this model kind");
}

namespace {

ReducedDistanceField build_field_impl(const FlowModel& m, const FieldSpec& spec, bool parallel) {
    if (m.kind == Kind::product)
        throw std::invalid_argument("build_field: fields are per-factor for products");
    if (!(spec.tau_min < spec.tau_max)) throw std::invalid_argument("build_field: tau range");
    ReducedDistanceField f;
    f.n = m.n;
    f.tau = geometric_grid(spec.tau_min, spec.tau_max, spec.per_decade);
    double xmax = spec.x_max;
    if (xmax <= 0.0) {
        xmax = std::sqrt(4.0 * spec.tau_max * spec.ell_cut);
        xmax = std::min(xmax, m.coord_max);
        if (m.off_axis()) xmax = std::min(xmax, m.profile->s_max());
    }
    f.x = linspace(0.0, xmax, spec.nx);
    const size_t nt = f.tau.size(), nx = f.x.size();
    f.ell.assign(nt * nx, 0.0);
    f.grad_ell.assign(nt * nx, 0.0);
    f.dtau_ell.assign(nt * nx, 0.0);
    f.kernel.assign(nt * nx, 0.0);
    f.flags.assign(nt * nx, 0);

    Route route = spec.route;
    if (route == Route::automatic)
        route = m.is_static() ? Route::closed_form
                              : (m.is_conformal() ? Route::conformal : Route::variational);

    const long total = static_cast<long>(nt * nx);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
    for (long k = 0; k < total; ++k) {
        const size_t it = static_cast<size_t>(k) / nx, ix = static_cast<size_t>(k) % nx;
        const double tau = f.tau[it], x = f.x[ix];
        double ell;
        if (route == Route::variational) {
            VariationalOptions opt;
            opt.segments = spec.segments;
            const auto r = reduced_distance_variational(m, x, tau, opt);
            ell = r.ell;
            if (!r.converged || r.below_lower_bound) f.flags[k] = 1;
        } else {
            ell = reduced_distance(m, x, tau, route);
        }
        f.ell[k] = ell;
        f.kernel[k] = std::pow(4.0 * M_PI * tau, -0.5 * m.n) * std::exp(-ell);
    }

    // centered differences (one-sided at edges)
    const double hx = f.x[1] - f.x[0];
    for (size_t it = 0; it < nt; ++it) {
        const double msc = m.metric_scale(f.tau[it]);
        for (size_t ix = 0; ix < nx; ++ix) {
            double d;
            if (ix == 0)
                d = (f.ell_at(it, 1) - f.ell_at(it, 0)) / hx;
            else if (ix == nx - 1)
                d = (f.ell_at(it, nx - 1) - f.ell_at(it, nx - 2)) / hx;
            else
                d = (f.ell_at(it, ix + 1) - f.ell_at(it, ix - 1)) / (2.0 * hx);
            f.grad_ell[f.idx(it, ix)] = std::abs(d) / msc;
        }
    }
    for (size_t ix = 0; ix < nx; ++ix) {
        for (size_t it = 0; it < nt; ++it) {
            double d;
            if (it == 0)
                d = (f.ell_at(1, ix) - f.ell_at(0, ix)) / (f.tau[1] - f.tau[0]);
            else if (it == nt - 1)
                d = (f.ell_at(nt - 1, ix) - f.ell_at(nt - 2, ix)) / (f.tau[nt - 1] - f.tau[nt - 2]);
            else {
                const double hl = f.tau[it] - f.tau[it - 1], hr = f.tau[it + 1] - f.tau[it];
                const double dl = (f.ell_at(it, ix) - f.ell_at(it - 1, ix)) / hl;
                const double dr = (f.ell_at(it + 1, ix) - f.ell_at(it, ix)) / hr;
                d = (hl * dr + hr * dl) / (hl + hr);
            }
            f.dtau_ell[f.idx(it, ix)] = d;
        }
    }
    return f;
}

}  // namespace

ReducedDistanceField build_field(const FlowModel& m, const FieldSpec& spec) {
    return build_field_impl(m, spec, spec.parallel);
}

ReducedDistanceField build_field_serial(const FlowModel& m, const FieldSpec& spec) {
    return build_field_impl(m, spec, false);
}

ResidualReport check_lower_bound(const ReducedDistanceField& f, const FlowModel& m, double tol) {
    ResidualReport rep;
    for (size_t it = 0; it < f.tau.size(); ++it)
        for (size_t ix = 0; ix < f.x.size(); ++ix) {
            const double bound = ell_lower_bound(m, f.x[ix], f.tau[it]);
            rep.max_residual = std::max(rep.max_residual, bound - f.ell_at(it, ix));
        }
    rep.max_residual = std::max(rep.max_residual, 0.0);
    rep.pass = rep.max_residual <= tol;
    rep.detail = "max of [lower_bound - ell]_+ over grid nodes";
    return rep;
}

GradientBoundReport check_gradient_bound(const ReducedDistanceField& f, const FlowModel&) {
    GradientBoundReport rep;
    const size_t nt = f.tau.size(), nx = f.x.size();
    rep.finite = true;
    for (size_t it = 1; it + 1 < nt; ++it) {
        double kstar = 0.0;
        for (size_t ix = 1; ix + 1 < nx; ++ix) {
            const size_t k = f.idx(it, ix);
            const double g2 = f.grad_ell[k] * f.grad_ell[k];
            const double num = std::max(g2, std::abs(f.dtau_ell[k]));
            kstar = std::max(kstar, f.tau[it] * num / (f.ell[k] + 1.0));
        }
        rep.tau.push_back(f.tau[it]);
        rep.kstar.push_back(kstar);
        rep.max_kstar = std::max(rep.max_kstar, kstar);
        if (!std::isfinite(kstar)) rep.finite = false;
    }
    return rep;
}

}  // namespace redgeo
