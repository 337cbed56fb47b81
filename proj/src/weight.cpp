#include "redgeo/weight.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "redgeo/lgeo.hpp"
#include "redgeo/quadrature.hpp"

namespace redgeo {

namespace {

const std::function<std::vector<double>(double)> kNoKinks = [](double) {
    return std::vector<double>{};
};

double fd_grad(const Fn2& phi, double x, double tau) {
    const double h = 1e-5 * (std::abs(x) + 1.0);
    return (phi(x + h, tau) - phi(std::max(x - h, 0.0), tau)) / (h + std::min(x, h));
}

double fd_dtau(const Fn2& phi, double x, double tau) {
    const double h = 1e-5 * tau;
    return (phi(x, tau + h) - phi(x, tau - h)) / (2.0 * h);
}

}  // namespace

std::string cert_status_name(CertStatus s) {
    switch (s) {
        case CertStatus::certified_analytic: return "certified_analytic";
        case CertStatus::certified_numeric: return "certified_numeric";
        case CertStatus::flagged: return "flagged";
        case CertStatus::unknown: return "unknown";
    }
    return "?";
}

Weight weight_constant(double c) {
    if (c < 0.0) throw std::invalid_argument("weight_constant: c < 0");
    Weight w;
    w.id = "const:" + std::to_string(c);
    w.phi = [c](double, double) { return c; };
    w.grad = [](double, double) { return 0.0; };
    w.dtau = [](double, double) { return 0.0; };
    w.kinks = kNoKinks;
    w.growth_const = std::max(c, 1e-300);
    w.is_constant = true;
    w.status = CertStatus::certified_analytic;
    return w;
}

Weight weight_shifted_heat_kernel(const FlowModel& m, double x0, double tau0) {
    if (m.kind != Kind::gaussian)
        throw std::invalid_argument("weight_shifted_heat_kernel: gaussian model only");
    if (!(tau0 > 0.0)) throw std::invalid_argument("weight_shifted_heat_kernel: tau0 <= 0");
    if (x0 != 0.0 && m.n != 1)
        throw std::invalid_argument(
            "weight_shifted_heat_kernel: off-center source needs the n=1 chart");
    const int n = m.n;
    Weight w;
    w.id = "heat-kernel:tau0=" + std::to_string(tau0);
    auto guard = [tau0](double tau) {
        if (tau >= tau0)
            throw std::domain_error("weight_shifted_heat_kernel: evaluated at tau >= tau0");
        return tau0 - tau;
    };
    auto gauss = [n](double y, double T) {
        return std::pow(4.0 * M_PI * T, -0.5 * n) * std::exp(-y * y / (4.0 * T));
    };
    if (x0 == 0.0) {
        w.phi = [gauss, guard](double x, double tau) { return gauss(x, guard(tau)); };
        w.grad = [gauss, guard](double x, double tau) {
            const double T = guard(tau);
            return -x / (2.0 * T) * gauss(x, T);
        };
        w.dtau = [gauss, guard, n](double x, double tau) {
            const double T = guard(tau);
            return gauss(x, T) * (0.5 * n / T - x * x / (4.0 * T * T));
        };
    } else {
        // symmetrized over the reflection x -> -x of the radial chart
        w.phi = [gauss, guard, x0](double x, double tau) {
            const double T = guard(tau);
            return 0.5 * (gauss(x - x0, T) + gauss(x + x0, T));
        };
    }
    w.kinks = kNoKinks;
    w.growth_const = std::pow(4.0 * M_PI * tau0, -0.5 * n) * (1.0 + 1.0 / tau0);
    w.status = CertStatus::certified_analytic;
    return w;
}

Weight weight_localization(const FlowModel& m, double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("weight_localization: rho <= 0");
    if (m.kind == Kind::product)
        throw std::invalid_argument("weight_localization: product models unsupported");
    const int n = m.n;
    const double r2 = rho * rho;
    const FlowModel mm = m;
    Weight w;
    w.id = "localization:rho=" + std::to_string(rho);
    w.phi = [mm, n, r2](double x, double tau) {
        const double lbar = 4.0 * tau * reduced_distance(mm, x, tau);
        return std::max(0.0, (lbar - 2.0 * n * tau) / r2);
    };
    w.grad = [mm, n, r2](double x, double tau) {
        const auto d = ell_derivs(mm, x, tau);
        if (4.0 * tau * d.ell - 2.0 * n * tau <= 0.0) return 0.0;
        // chart derivative of ell is grad_norm * metric_scale
        const double sgn = x >= 0.0 ? 1.0 : -1.0;
        return 4.0 * tau * d.grad_norm * mm.metric_scale(tau) * sgn / r2;
    };
    w.dtau = [mm, n, r2](double x, double tau) {
        const auto d = ell_derivs(mm, x, tau);
        if (4.0 * tau * d.ell - 2.0 * n * tau <= 0.0) return 0.0;
        return (4.0 * d.ell + 4.0 * tau * d.dtau - 2.0 * n) / r2;
    };
    // kink set {ell = n/2}
    w.kinks = [mm, n](double tau) {
        std::vector<double> ks;
        double lo = 0.0, hi = std::min(mm.coord_max, std::sqrt(2.0 * n * tau) * 4.0 + 1.0);
        if (reduced_distance(mm, hi, tau) <= 0.5 * n) return ks;
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            (reduced_distance(mm, mid, tau) < 0.5 * n ? lo : hi) = mid;
        }
        ks.push_back(0.5 * (lo + hi));
        return ks;
    };
    w.growth_const = (1.0 + 2.0 * n) / r2 + 1.0;
    w.status = CertStatus::unknown;
    return w;
}

Weight weight_negative_control(const FlowModel& m) {
    const int n = m.n;
    Weight w;
    w.id = "negative-control";
    w.phi = [n](double x, double tau) { return x * x + 2.0 * n * tau; };
    w.grad = [](double x, double) { return 2.0 * x; };
    w.dtau = [n](double, double) { return 2.0 * static_cast<double>(n); };
    w.kinks = kNoKinks;
    w.growth_const = 2.0 * n + 1.0;
    w.status = CertStatus::unknown;
    return w;
}

Weight weight_min(const Weight& w1, const Weight& w2) {
    Weight w;
    w.id = "min(" + w1.id + "," + w2.id + ")";
    const Weight a = w1, b = w2;
    w.phi = [a, b](double x, double tau) { return std::min(a.phi(x, tau), b.phi(x, tau)); };
    w.grad = [a, b](double x, double tau) {
        const Weight& pick = a.phi(x, tau) <= b.phi(x, tau) ? a : b;
        return pick.grad ? pick.grad(x, tau) : fd_grad(pick.phi, x, tau);
    };
    w.dtau = [a, b](double x, double tau) {
        const Weight& pick = a.phi(x, tau) <= b.phi(x, tau) ? a : b;
        return pick.dtau ? pick.dtau(x, tau) : fd_dtau(pick.phi, x, tau);
    };
    w.kinks = [a, b](double tau) {
        std::vector<double> ks;
        if (a.kinks) for (double k : a.kinks(tau)) ks.push_back(k);
        if (b.kinks) for (double k : b.kinks(tau)) ks.push_back(k);
        // crossings of the two branches
        const double hi = std::sqrt(4.0 * tau * 40.0) + 5.0;
        const int scan = 512;
        double prev = a.phi(0.0, tau) - b.phi(0.0, tau);
        for (int i = 1; i <= scan; ++i) {
            const double x = hi * i / scan;
            const double cur = a.phi(x, tau) - b.phi(x, tau);
            if ((prev < 0.0) != (cur < 0.0)) {
                double lo = hi * (i - 1) / scan, up = x;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + up);
                    ((a.phi(mid, tau) - b.phi(mid, tau) < 0.0) == (prev < 0.0) ? lo : up) = mid;
                }
                ks.push_back(0.5 * (lo + up));
            }
            prev = cur;
        }
        std::sort(ks.begin(), ks.end());
        return ks;
    };
    w.growth_const = std::min(a.growth_const, b.growth_const) + 1.0;
    w.status = (w1.admissible() && w2.admissible()) ? CertStatus::unknown : CertStatus::flagged;
    return w;
}

CertificationReport certify_subsolution(Weight& w, const FlowModel& m, const CertifyOptions& opt) {
    if (m.kind == Kind::product)
        throw std::invalid_argument("certify_subsolution: product models unsupported");
    std::vector<double> taus = opt.tau_samples;
    if (taus.empty()) taus = geometric_grid(0.05, 20.0, 4);
    if (opt.widths.empty() || opt.centers_per_tau < 1)
        throw std::invalid_argument("certify_subsolution: empty test family");

    CertificationReport rep;
    rep.weight_id = w.id;
    double worst_excess = -std::numeric_limits<double>::infinity();

    auto grad = [&w](double x, double tau) {
        return w.grad ? w.grad(x, tau) : fd_grad(w.phi, x, tau);
    };
    auto dtau = [&w](double x, double tau) {
        return w.dtau ? w.dtau(x, tau) : fd_dtau(w.phi, x, tau);
    };

    for (double tau : taus) {
        const double msc = m.metric_scale(tau);
        const double xhi = std::min(m.coord_max * 0.98, std::sqrt(4.0 * tau * 40.0) + 4.0);
        std::vector<double> kinks = w.kinks ? w.kinks(tau) : std::vector<double>{};
        std::vector<std::pair<double, double>> family;  // (center, width)
        for (double width : opt.widths) {
            const double b = width * std::min(1.0, 0.25 * xhi);
            for (int i = 0; i < opt.centers_per_tau; ++i) {
                const double c = b + (xhi - 2.0 * b) * i / std::max(1, opt.centers_per_tau - 1);
                if (c >= b && c + b <= xhi) family.emplace_back(c, b);
            }
            for (double k : kinks)
                if (k >= b && k + b <= xhi) family.emplace_back(k, b);
        }
        for (const auto& [c, b] : family) {
            auto bump = [c, b](double x) {
                const double u = (x - c) / b;
                const double t = 1.0 - u * u;
                return t > 0.0 ? t * t * t : 0.0;
            };
            auto bump_d = [c, b](double x) {
                const double u = (x - c) / b;
                const double t = 1.0 - u * u;
                return t > 0.0 ? -6.0 * u * t * t / b : 0.0;
            };
            auto integrand = [&](double x) {
                const double wv = m.vol_element(x, tau);
                return (bump(x) * dtau(x, tau) - bump_d(x) * grad(x, tau) / (msc * msc)) * wv;
            };
            // split the quadrature at kinks inside the support
            std::vector<double> pts = {c - b, c + b};
            for (double k : kinks)
                if (k > c - b && k < c + b) pts.push_back(k);
            std::sort(pts.begin(), pts.end());
            double residual = 0.0;
            for (size_t i = 0; i + 1 < pts.size(); ++i)
                residual += integrate_simpson(integrand, pts[i], pts[i + 1], opt.quad_points);
            const double mass = integrate_simpson(
                [&](double x) { return bump(x) * m.vol_element(x, tau); }, c - b, c + b,
                opt.quad_points);
            double phimax = 0.0;
            for (int i = 0; i <= 16; ++i)
                phimax = std::max(phimax, std::abs(w.phi(c - b + 2.0 * b * i / 16.0, tau)));
            const double scale = mass * (1.0 + phimax) + 1e-12;
            ++rep.tests;
            const double excess = residual - opt.rel_tol * scale;
            if (excess > worst_excess) {
                worst_excess = excess;
                rep.worst_residual = residual;
                rep.worst_scale = scale;
                rep.witness_center = c;
                rep.witness_width = b;
                rep.witness_tau = tau;
            }
        }
    }
    if (rep.tests == 0) throw std::invalid_argument("certify_subsolution: empty test family");
    const bool pass = worst_excess <= 0.0;
    if (pass) {
        rep.status = w.status == CertStatus::certified_analytic ? CertStatus::certified_analytic
                                                                : CertStatus::certified_numeric;
    } else {
        rep.status = CertStatus::flagged;
    }
    w.status = rep.status;
    return rep;
}

}  // namespace redgeo
