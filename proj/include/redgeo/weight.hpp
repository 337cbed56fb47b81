#pragma once

#include <functional>
#include <string>
#include <vector>

#include "redgeo/model.hpp"

namespace redgeo {

enum class CertStatus { certified_analytic, certified_numeric, flagged, unknown };

std::string cert_status_name(CertStatus s);

// A non-negative localization weight phi(coord, tau) in the model chart.
struct Weight {
    std::string id;
    Fn2 phi;
    Fn2 grad;  // d phi / d coord, null = finite differences
    Fn2 dtau;  // d phi / d tau,  null = finite differences
    std::function<std::vector<double>(double)> kinks;  // kink coordinates at tau
    double growth_const = 1.0;
    bool is_constant = false;
    CertStatus status = CertStatus::unknown;

    bool admissible() const {
        return status == CertStatus::certified_analytic || status == CertStatus::certified_numeric;
    }
};

Weight weight_constant(double c);

// Reversed-time heat kernel concentrating at (x0, tau0) on the Gaussian
// model; caloric on [0, tau0). x0 must be 0 in the radial chart (n >= 2);
// n = 1 uses the symmetrized two-source kernel.
Weight weight_shifted_heat_kernel(const FlowModel& m, double x0, double tau0);

// phi = max{0, (Lbar - 2 n tau) / rho^2} with Lbar = 4 tau ell, based at the
// model's base point. Certification status is left to certify_subsolution.
Weight weight_localization(const FlowModel& m, double rho);

// Deliberately inadmissible weight d^2 + 2 n tau (negative control).
Weight weight_negative_control(const FlowModel& m);

// Pointwise minimum; the concave kink has the favorable sign for the
// subsolution inequality, confirmed numerically by certify_subsolution.
Weight weight_min(const Weight& w1, const Weight& w2);

struct CertifyOptions {
    std::vector<double> tau_samples;       // empty = default geometric set
    std::vector<double> widths = {0.3, 1.0, 3.0};
    int centers_per_tau = 9;
    int quad_points = 800;
    double rel_tol = 2e-6;
};

struct CertificationReport {
    CertStatus status = CertStatus::unknown;
    double worst_residual = 0.0;        // max over the test family
    double worst_scale = 1.0;           // normalization of the worst test
    double witness_center = 0.0;
    double witness_width = 0.0;
    double witness_tau = 0.0;
    int tests = 0;
    std::string weight_id;
};

// Weak-form check of (d/dtau + Lap) phi <= 0 against a family of smooth
// compactly supported bumps; updates w.status.
CertificationReport certify_subsolution(Weight& w, const FlowModel& m,
                                        const CertifyOptions& opt = {});

}  // namespace redgeo
