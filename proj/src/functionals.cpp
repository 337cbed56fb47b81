#include "redgeo/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "redgeo/lgeo.hpp"
#include "redgeo/quadrature.hpp"

namespace redgeo {

namespace {

// Per-tau evaluation cache: the conformal route's two tau-integrals are
// computed once per slice, not per spatial node.
struct SliceEval {
    const FlowModel* m;
    double tau;
    double sq;          // sqrt(tau)
    double A = 0.0;     // conformal kinetic integral
    double B = 0.0;     // conformal trace integral
    double msc = 1.0;
    double H = 0.0;     // trace h (spatially constant on the catalog)
    Route route = Route::automatic;
    int segments = 64;

    SliceEval(const FlowModel& model, double t, Route r = Route::automatic, int segs = 64)
        : m(&model), tau(t), sq(std::sqrt(t)), route(r), segments(segs) {
        if (!(t > 0.0)) throw std::out_of_range("tau out of range (tau <= 0)");
        msc = model.metric_scale(t);
        H = model.kind == Kind::product ? 0.0 : model.trace_h(0.0, t);
        if (model.is_conformal()) {
            A = conformal_kinetic_integral(model, t);
            B = conformal_trace_integral(model, t);
        }
    }

    double ell(double x) const {
        if (route == Route::variational) {
            VariationalOptions opt;
            opt.segments = segments;
            return reduced_distance_variational(*m, x, tau, opt).ell;
        }
        if (m->is_static()) return x * x / (4.0 * tau);
        return (x * x / A + B) / (2.0 * sq);
    }
    double grad(double x) const {  // |grad ell|_{g(tau)}
        if (m->is_static()) return std::abs(x) / (2.0 * tau);
        return std::abs(x) / (A * sq * msc);
    }
    double dtau(double x) const {
        if (m->is_static()) return -x * x / (4.0 * tau * tau);
        const double Ap = 1.0 / (sq * m->a(tau));
        const double Bp = sq * H;
        const double e = ell(x);
        return (-x * x * Ap / (A * A) + Bp) / (2.0 * sq) - e / (2.0 * tau);
    }
};

// Boundary of {ell < threshold}; ell >= x^2/(4 tau) on the catalog (kappa = 0),
// so the root lies in [0, sqrt(4 tau threshold)].
double sublevel_boundary(const SliceEval& ev, double threshold, bool* full) {
    if (full) *full = false;
    if (threshold <= 0.0) return 0.0;
    double hi = std::sqrt(4.0 * ev.tau * threshold);
    const double dom = ev.m->coord_max;
    if (hi >= dom) {
        if (ev.ell(dom) < threshold) {
            if (full) *full = true;
            return dom;
        }
        hi = dom;
    }
    double lo = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ev.ell(mid) < threshold ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// integral over [0, xhi] of f(x) dmu_{g(tau)}
template <typename F>
double spatial_integral(const SliceEval& ev, double xhi, F&& f, int n_space) {
    if (xhi <= 0.0) return 0.0;
    const FlowModel& m = *ev.m;
    if (m.off_axis()) {
        const RadialProfile& p = *m.profile;
        // Near the base point the surface is smooth, so the mass-bin table is
        // too coarse: integrate the local circumference expansion there and
        // switch to the bins beyond.
        const double bw = p.s_edges[1] - p.s_edges[0];
        const double s_smooth = std::min(8.0 * bw, 0.5 * p.s_max());
        double K0 = 0.0;
        if (m.warp && m.warp_d2) K0 = -m.warp_d2(m.base_offset) / m.warp(m.base_offset);
        const double cut = std::min(xhi, s_smooth);
        double acc = integrate_simpson(
            [&](double s) {
                const double circ = 2.0 * M_PI * s * std::max(0.0, 1.0 - K0 * s * s / 6.0);
                return f(s) * circ;
            },
            0.0, cut, std::min(n_space, 200));
        if (xhi <= s_smooth) return acc;
        for (size_t k = 0; k < p.mass.size(); ++k) {
            const double lo = p.s_edges[k], hi = p.s_edges[k + 1];
            if (lo >= xhi) break;
            if (hi <= s_smooth || p.mass[k] <= 0.0) continue;
            const double cov_lo = std::max(lo, s_smooth);
            const double cov_hi = std::min(hi, xhi);
            if (cov_hi <= cov_lo) continue;
            const double frac = (cov_hi - cov_lo) / (hi - lo);
            const double at = frac >= 1.0 ? p.s_center[k] : 0.5 * (cov_lo + cov_hi);
            acc += f(at) * p.mass[k] * frac;
        }
        return acc;
    }
    const double tau = ev.tau;
    return integrate_simpson([&](double x) { return f(x) * m.vol_element(x, tau); }, 0.0, xhi,
                             n_space);
}

struct TauGrid {
    std::vector<double> u;   // log tau nodes (Simpson)
    std::vector<double> wt;  // Simpson weights including du/3 factor
};

TauGrid heat_ball_tau_grid(int n_dim, double tau_cap, const FunctionalOptions& opt) {
    TauGrid g;
    int nseg = std::max(16, opt.n_tau);
    if (nseg % 2 != 0) ++nseg;
    const double depth = 2.0 * opt.tail_log / n_dim;
    const double u_cap = std::log(tau_cap);
    const double du = depth / nseg;
    g.u.resize(nseg + 1);
    g.wt.resize(nseg + 1);
    for (int i = 0; i <= nseg; ++i) {
        g.u[i] = u_cap - depth + du * i;
        g.wt[i] = (i == 0 || i == nseg) ? du / 3.0 : (i % 2 == 1 ? 4.0 * du / 3.0 : 2.0 * du / 3.0);
    }
    return g;
}

void require_constant_for_product(const FlowModel& m, const Weight& phi) {
    if (m.kind == Kind::product && !phi.is_constant)
        throw std::invalid_argument("product models support constant weights only");
}

// Bulk integral over a slice of the product model S^2 x R: the line-factor
// integral is polynomial in x and done in closed form.
// f(theta) -> (c0, c2) with inner integrand c0 + c2 x^2 on |x| < b(theta).
template <typename Coeffs>
double product_slice_integral(const FlowModel& m, const SliceEval& ev1, double threshold,
                              double theta_b, Coeffs&& coeffs, int n_space) {
    if (theta_b <= 0.0) return 0.0;
    const FlowModel& f1 = m.factors[0];
    const double tau = ev1.tau;
    auto integrand = [&](double theta) {
        const double l1 = ev1.ell(theta);
        const double rem = threshold - l1;
        if (rem <= 0.0) return 0.0;
        const double b = std::sqrt(4.0 * tau * rem);
        double c0 = 0.0, c2 = 0.0;
        coeffs(theta, l1, c0, c2);
        // line factor: vol element sigma_0 = 2 on the radial chart
        return (c0 * b + c2 * b * b * b / 3.0) * 2.0 * f1.vol_element(theta, tau);
    };
    return integrate_simpson(integrand, 0.0, theta_b, n_space);
}

enum class IForm { primary, alternative };

double local_I_impl(const FlowModel& m, const Weight& phi, double r, IForm form,
                    const FunctionalOptions& opt) {
    require_constant_for_product(m, phi);
    if (!(r > 0.0)) throw std::invalid_argument("local_I: r <= 0");
    const int n = m.n;
    const double tau_cap = r * r / (4.0 * M_PI);
    const TauGrid tg = heat_ball_tau_grid(n, tau_cap, opt);
    double acc = 0.0;
    for (size_t i = 0; i < tg.u.size(); ++i) {
        const double tau = std::exp(tg.u[i]);
        const double threshold = 0.5 * n * (std::log(tau_cap) - tg.u[i]);
        double bulk = 0.0;
        if (m.kind == Kind::product) {
            const SliceEval ev1(m.factors[0], tau);
            bool full = false;
            const double theta_b = sublevel_boundary(ev1, threshold, &full);
            const double c = phi.phi(0.0, tau);
            const double H = m.factors[0].trace_h(0.0, tau);
            bulk = product_slice_integral(
                m, ev1, threshold, theta_b,
                [&](double theta, double l1, double& c0, double& c2) {
                    const double g1 = ev1.grad(theta);
                    if (form == IForm::primary) {
                        c0 = c * (g1 * g1 + H * (threshold - l1));
                        c2 = c * (1.0 / (4.0 * tau * tau) - H / (4.0 * tau));
                    } else {
                        c0 = c * (g1 * g1 + ev1.dtau(theta) + 0.5 * n / tau);
                        c2 = 0.0;  // the x-part of |grad psi|^2 cancels dpsi/dtau
                    }
                },
                opt.n_space);
        } else {
            const SliceEval ev(m, tau);
            bool full = false;
            const double x_b = sublevel_boundary(ev, threshold, &full);
            auto f = form == IForm::primary
                         ? std::function<double(double)>([&](double x) {
                               const double g = ev.grad(x);
                               return (g * g + ev.H * (threshold - ev.ell(x))) * phi.phi(x, tau);
                           })
                         : std::function<double(double)>([&](double x) {
                               const double g = ev.grad(x);
                               return (g * g + ev.dtau(x) + 0.5 * n / tau) * phi.phi(x, tau);
                           });
            bulk = spatial_integral(ev, x_b, f, opt.n_space);
        }
        acc += tg.wt[i] * bulk * tau;  // d tau = tau du
    }
    return acc * std::pow(r, -n);
}

}  // namespace

double reduced_volume(const FlowModel& m, const Weight& phi, double tau,
                      const FunctionalOptions& opt) {
    if (!(tau > 0.0)) throw std::out_of_range("reduced_volume: tau out of range");
    if (m.kind == Kind::product) {
        require_constant_for_product(m, phi);
        double v = phi.phi(0.0, tau);
        FunctionalOptions fopt = opt;
        for (const auto& f : m.factors) v *= reduced_volume(f, weight_constant(1.0), tau, fopt);
        return v;
    }
    const SliceEval ev(m, tau, opt.ell_route, opt.segments);
    bool full = false;
    const SliceEval exact(m, tau);  // truncation radius from the exact route
    double xhi = sublevel_boundary(exact, opt.ell_cut, &full);
    if (m.off_axis()) xhi = std::min(xhi, m.profile->s_max());
    const double pref = std::pow(4.0 * M_PI * tau, -0.5 * m.n);
    return spatial_integral(
        ev, xhi, [&](double x) { return pref * std::exp(-ev.ell(x)) * phi.phi(x, tau); },
        opt.n_space);
}

PseudoHeatBall pseudo_heat_ball(const FlowModel& m, double r, const FunctionalOptions& opt) {
    if (!(r > 0.0)) throw std::invalid_argument("pseudo_heat_ball: r <= 0");
    if (m.kind == Kind::product)
        throw std::invalid_argument("pseudo_heat_ball: product slices are factor-resolved");
    PseudoHeatBall ball;
    ball.r = r;
    ball.tau_cap = r * r / (4.0 * M_PI);
    const TauGrid tg = heat_ball_tau_grid(m.n, ball.tau_cap, opt);
    for (size_t i = 0; i < tg.u.size(); ++i) {
        HeatBallSlice s;
        s.u = tg.u[i];
        s.tau = std::exp(s.u);
        s.threshold = 0.5 * m.n * (std::log(ball.tau_cap) - s.u);
        const SliceEval ev(m, s.tau);
        s.x_b = sublevel_boundary(ev, s.threshold, &s.full);
        ball.slices.push_back(s);
    }
    return ball;
}

double local_I_primary(const FlowModel& m, const Weight& phi, double r,
                       const FunctionalOptions& opt) {
    return local_I_impl(m, phi, r, IForm::primary, opt);
}

double local_I_alternative(const FlowModel& m, const Weight& phi, double r,
                           const FunctionalOptions& opt) {
    return local_I_impl(m, phi, r, IForm::alternative, opt);
}

double local_J(const FlowModel& m, const Weight& phi, double r, const FunctionalOptions& opt) {
    require_constant_for_product(m, phi);
    if (!(r > 0.0)) throw std::invalid_argument("local_J: r <= 0");
    const int n = m.n;
    const double rn = std::pow(r, -n);
    const double tau_cap = r * r / (4.0 * M_PI);
    const TauGrid tg = heat_ball_tau_grid(n, tau_cap, opt);
    double surface = 0.0, bulk = 0.0;
    for (size_t i = 0; i < tg.u.size(); ++i) {
        const double tau = std::exp(tg.u[i]);
        const double threshold = 0.5 * n * (std::log(tau_cap) - tg.u[i]);
        double S = 0.0, Hterm = 0.0;
        if (m.kind == Kind::product) {
            const SliceEval ev1(m.factors[0], tau);
            const double c = phi.phi(0.0, tau);
            const double H = m.factors[0].trace_h(0.0, tau);
            // |grad K| surface integral via co-area in the level value:
            // S = r^-n * d/dc int_{ell < c} |grad ell|^2 dmu at c = threshold.
            auto gradmass = [&](double cc) {
                bool full = false;
                const double tb = sublevel_boundary(ev1, cc, &full);
                return product_slice_integral(
                    m, ev1, cc, tb,
                    [&](double theta, double, double& c0, double& c2) {
                        const double g1 = ev1.grad(theta);
                        c0 = g1 * g1;
                        c2 = 1.0 / (4.0 * tau * tau);
                    },
                    opt.n_space);
            };
            if (threshold > 0.0) {
                const double del = std::max(1e-4, 1e-3 * threshold);
                S = rn * c * (gradmass(threshold + del) - gradmass(std::max(threshold - del, 0.0))) /
                    (del + std::min(threshold, del));
            }
            bool full = false;
            const double tb = sublevel_boundary(ev1, threshold, &full);
            Hterm = product_slice_integral(
                m, ev1, threshold, tb,
                [&](double, double, double& c0, double& c2) {
                    c0 = c * H;
                    c2 = 0.0;
                },
                opt.n_space);
        } else {
            const SliceEval ev(m, tau);
            bool full = false;
            const double x_b = sublevel_boundary(ev, threshold, &full);
            if (!full && x_b > 0.0) {
                const double g = ev.grad(x_b);
                if (g > 1e-12) {
                    const double area = m.vol_element(x_b, tau) / ev.msc;
                    S = rn * g * phi.phi(x_b, tau) * area;
                }
            }
            if (ev.H != 0.0)
                Hterm = spatial_integral(
                    ev, x_b, [&](double x) { return ev.H * phi.phi(x, tau); }, opt.n_space);
        }
        surface += tg.wt[i] * S * tau;
        bulk += tg.wt[i] * Hterm * tau;
    }
    return surface + rn * bulk;
}

// ---- curves -----------------------------------------------------------------

namespace {

template <typename F>
MonotoneSeries sample_curve(const std::string& quantity, double lo, double hi, int per_decade,
                            bool parallel, F&& f) {
    MonotoneSeries s;
    s.quantity = quantity;
    s.arg = geometric_grid(lo, hi, per_decade);
    s.value.assign(s.arg.size(), 0.0);
    s.flag.assign(s.arg.size(), 0);
    const long count = static_cast<long>(s.arg.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long i = 0; i < count; ++i) s.value[i] = f(s.arg[i]);
    return s;
}

}  // namespace

MonotoneSeries rv_curve(const FlowModel& m, const Weight& phi, double tau_lo, double tau_hi,
                        int per_decade, const FunctionalOptions& opt) {
    return sample_curve("rv", tau_lo, tau_hi, per_decade, opt.parallel,
                        [&](double tau) { return reduced_volume(m, phi, tau, opt); });
}

MonotoneSeries i_curve(const FlowModel& m, const Weight& phi, double r_lo, double r_hi,
                       int per_decade, const FunctionalOptions& opt) {
    return sample_curve("local_i", r_lo, r_hi, per_decade, opt.parallel,
                        [&](double r) { return local_I_primary(m, phi, r, opt); });
}

MonotoneSeries i_curve_alternative(const FlowModel& m, const Weight& phi, double r_lo,
                                   double r_hi, int per_decade, const FunctionalOptions& opt) {
    return sample_curve("local_i_alt", r_lo, r_hi, per_decade, opt.parallel,
                        [&](double r) { return local_I_alternative(m, phi, r, opt); });
}

MonotoneSeries j_curve(const FlowModel& m, const Weight& phi, double r_lo, double r_hi,
                       int per_decade, const FunctionalOptions& opt) {
    return sample_curve("local_j", r_lo, r_hi, per_decade, opt.parallel,
                        [&](double r) { return local_J(m, phi, r, opt); });
}

MonotonicityReport check_monotone(const MonotoneSeries& s, double rel_tol) {
    MonotonicityReport rep;
    for (size_t i = 0; i + 1 < s.value.size(); ++i) {
        const double scale = std::max(std::abs(s.value[i]), 1e-300);
        const double rel = (s.value[i + 1] - s.value[i]) / scale;
        if (rel > rel_tol) ++rep.violations;
        rep.worst_rel_increase = std::max(rep.worst_rel_increase, rel);
    }
    rep.pass = rep.violations == 0;
    return rep;
}

LimitEstimate estimate_limit(const MonotoneSeries& s) {
    const size_t total = s.arg.size();
    if (total < 6 || !(s.arg.back() >= 100.0 * s.arg.front() * 0.999))
        throw std::invalid_argument("estimate_limit: need >= 6 samples spanning >= 2 decades");
    size_t first = 0;
    while (first < total && s.arg[first] < 0.1 * s.arg.back() * 0.999) ++first;
    if (total - first < 4) first = total - std::min<size_t>(total, 6);

    LimitEstimate best;
    double best_sse = std::numeric_limits<double>::infinity();
    double best_a = 0.0;
    for (int k = 0; k <= 80; ++k) {
        const double b = 0.05 * std::pow(60.0, k / 80.0);  // 0.05 .. 3
        double s11 = 0, s1x = 0, sxx = 0, s1y = 0, sxy = 0;
        for (size_t i = first; i < total; ++i) {
            const double xb = std::pow(s.arg[i], -b);
            s11 += 1.0; s1x += xb; sxx += xb * xb;
            s1y += s.value[i]; sxy += xb * s.value[i];
        }
        const double det = s11 * sxx - s1x * s1x;
        if (std::abs(det) < 1e-30) continue;
        const double yinf = (s1y * sxx - s1x * sxy) / det;
        const double a = (s11 * sxy - s1x * s1y) / det;
        double sse = 0.0;
        for (size_t i = first; i < total; ++i) {
            const double e = s.value[i] - yinf - a * std::pow(s.arg[i], -b);
            sse += e * e;
        }
        if (sse < best_sse) {
            best_sse = sse;
            best.value = yinf;
            best.exponent = b;
            best_a = a;
        }
    }
    const double rmse = std::sqrt(best_sse / (total - first));
    const double last_gap = std::abs(best.value - s.value.back());
    best.error = std::max(last_gap, rmse);
    const double scale = std::max(std::abs(best.value), 1e-6);
    const bool decay_matters =
        std::abs(best_a) * std::pow(s.arg.back(), -best.exponent) > 1e-9 * scale;
    best.converged = !decay_matters ||
                     (best.exponent > 0.055 && best.error <= 0.1 * scale);
    return best;
}

double check_IJ_relation(const MonotoneSeries& I, const MonotoneSeries& J, int n,
                         double j_origin) {
    if (J.arg.size() < 4) throw std::invalid_argument("check_IJ_relation: J too sparse");
    const double eta0 = J.arg.front();
    // cumulative int_{eta0}^{r} eta^{n-1} J d eta on the J grid
    std::vector<double> cum(J.arg.size(), 0.0);
    for (size_t i = 1; i < J.arg.size(); ++i) {
        const double f0 = std::pow(J.arg[i - 1], n - 1) * J.value[i - 1];
        const double f1 = std::pow(J.arg[i], n - 1) * J.value[i];
        cum[i] = cum[i - 1] + 0.5 * (f0 + f1) * (J.arg[i] - J.arg[i - 1]);
    }
    const double head = j_origin * std::pow(eta0, n) / n;  // J ~ phi(p,0) below eta0
    double worst = 0.0;
    for (size_t k = 0; k < I.arg.size(); ++k) {
        const double r = I.arg[k];
        if (r < eta0 * (1.0 + 1e-9) || r > J.arg.back() * (1.0 + 1e-9)) continue;
        const auto it = std::lower_bound(J.arg.begin(), J.arg.end(), r * (1.0 - 1e-12));
        size_t j = static_cast<size_t>(it - J.arg.begin());
        double c;
        if (j >= J.arg.size()) {
            c = cum.back();
        } else if (std::abs(J.arg[j] - r) < 1e-9 * r || j == 0) {
            c = cum[j];
        } else {
            const double t = (r - J.arg[j - 1]) / (J.arg[j] - J.arg[j - 1]);
            c = cum[j - 1] + t * (cum[j] - cum[j - 1]);
        }
        const double rhs = n * std::pow(r, -n) * (head + c);
        worst = std::max(worst, std::abs(I.value[k] - rhs) / std::max(std::abs(I.value[k]), 1e-300));
    }
    return worst;
}

// ---- solitons ---------------------------------------------------------------

SolitonModel make_soliton(const std::string& descriptor) {
    const ModelSpec spec = parse_model_spec(descriptor);
    auto get = [&spec](const std::string& key, double fallback) {
        auto it = spec.params.find(key);
        return it == spec.params.end() ? fallback : it->second;
    };
    SolitonModel s;
    if (spec.name == "gaussian") {
        const int n = static_cast<int>(get("n", 2));
        const double lambda = get("lambda", 1.0);
        s.name = descriptor;
        s.n = n;
        s.lambda = lambda;
        s.coord_max = std::sqrt(4.0 * lambda * 80.0);
        s.potential = [lambda](double x) { return x * x / (4.0 * lambda); };
        s.potential_d1 = [lambda](double x) { return x / (2.0 * lambda); };
        s.scalar_curv = [](double) { return 0.0; };
        const double sigma = unit_sphere_area(n - 1);
        s.vol_element = [sigma, n](double x) { return sigma * std::pow(x, n - 1); };
        return s;
    }
    if (spec.name == "sphere") {
        const int n = static_cast<int>(get("n", 2));
        if (n < 2) throw std::invalid_argument("soliton sphere: need n >= 2");
        s.name = descriptor;
        s.n = n;
        s.lambda = 1.0 / (2.0 * (n - 1));  // Ric = (n-1) g = g / (2 lambda)
        s.coord_max = M_PI;
        const double f0 = 0.5 * n;  // lambda * R = n/2 for the Einstein case
        s.potential = [f0](double) { return f0; };
        s.potential_d1 = [](double) { return 0.0; };
        s.scalar_curv = [n](double) { return static_cast<double>(n) * (n - 1); };
        const double sigma = unit_sphere_area(n - 1);
        s.vol_element = [sigma, n](double x) { return sigma * std::pow(std::sin(x), n - 1); };
        return s;
    }
    throw std::invalid_argument("unknown soliton '" + spec.name + "'");
}

double soliton_normalization_residual(const SolitonModel& s) {
    double worst = 0.0;
    for (double x : linspace(0.0, s.coord_max * 0.999, 64)) {
        const double g = s.potential_d1(x);
        const double res = s.lambda * (g * g + s.scalar_curv(x)) - s.potential(x);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

double gaussian_density(const SolitonModel& s) {
    if (soliton_normalization_residual(s) > 1e-8)
        throw std::invalid_argument(
            "gaussian_density: potential is not normalized; shift f by a constant so that "
            "lambda(|grad f|^2 + R) - f = 0");
    const double pref = std::pow(4.0 * M_PI * s.lambda, -0.5 * s.n);
    return integrate_simpson(
        [&s, pref](double x) { return pref * std::exp(-s.potential(x)) * s.vol_element(x); }, 0.0,
        s.coord_max, 4000);
}

}  // namespace redgeo
