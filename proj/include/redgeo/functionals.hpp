#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "redgeo/lgeo.hpp"
#include "redgeo/model.hpp"
#include "redgeo/weight.hpp"

namespace redgeo {

struct FunctionalOptions {
    int n_space = 600;     // spatial Simpson intervals per slice
    int n_tau = 512;       // Simpson intervals for tau-integrals over E_r
    double ell_cut = 40.0; // spatial truncation level for reduced-volume tails
    double tail_log = 60.0;// log-tau depth below the cap of E_r (scaled by 2/n)
    bool parallel = true;  // parallelize curve sampling
    Route ell_route = Route::automatic;  // reduced_volume only
    int segments = 64;                   // variational route
};

// Reduced volume integral of K * phi over the tau-slice.
double reduced_volume(const FlowModel& m, const Weight& phi, double tau,
                      const FunctionalOptions& opt = {});

struct HeatBallSlice {
    double tau = 0.0;
    double u = 0.0;          // log tau
    double threshold = 0.0;  // n log(r / sqrt(4 pi tau))
    double x_b = 0.0;        // boundary coordinate of the sub-level set
    bool full = false;       // slice covers the whole (compact) space
};

struct PseudoHeatBall {
    double r = 0.0;
    double tau_cap = 0.0;  // r^2 / (4 pi)
    std::vector<HeatBallSlice> slices;
};

PseudoHeatBall pseudo_heat_ball(const FlowModel& m, double r, const FunctionalOptions& opt = {});

// I(r) with the gradient + H log(K r^n) integrand.
double local_I_primary(const FlowModel& m, const Weight& phi, double r,
                       const FunctionalOptions& opt = {});

// I(r) with the |grad psi|^2 - dpsi/dtau integrand, psi = log K.
double local_I_alternative(const FlowModel& m, const Weight& phi, double r,
                           const FunctionalOptions& opt = {});

// J(r): boundary term via co-area tau-slicing plus the H bulk term.
double local_J(const FlowModel& m, const Weight& phi, double r,
               const FunctionalOptions& opt = {});

// ---- curves and limits ------------------------------------------------------

struct MonotoneSeries {
    std::string quantity;
    std::vector<double> arg;   // tau or r, geometric spacing
    std::vector<double> value;
    std::vector<uint8_t> flag; // per-sample quality flag
};

MonotoneSeries rv_curve(const FlowModel& m, const Weight& phi, double tau_lo, double tau_hi,
                        int per_decade, const FunctionalOptions& opt = {});
MonotoneSeries i_curve(const FlowModel& m, const Weight& phi, double r_lo, double r_hi,
                       int per_decade, const FunctionalOptions& opt = {});
MonotoneSeries i_curve_alternative(const FlowModel& m, const Weight& phi, double r_lo,
                                   double r_hi, int per_decade,
                                   const FunctionalOptions& opt = {});
MonotoneSeries j_curve(const FlowModel& m, const Weight& phi, double r_lo, double r_hi,
                       int per_decade, const FunctionalOptions& opt = {});

struct MonotonicityReport {
    int violations = 0;
    double worst_rel_increase = 0.0;
    bool pass = false;
};

// Non-increasing within rel_tol per step; violations are recorded, not dropped.
MonotonicityReport check_monotone(const MonotoneSeries& s, double rel_tol);

struct LimitEstimate {
    double value = 0.0;
    double error = 0.0;
    double exponent = 0.0;  // fitted decay rate b in y_inf + a x^-b
    bool converged = false;
};

// Least-squares fit of y_inf + a x^-b on the last decade of samples.
LimitEstimate estimate_limit(const MonotoneSeries& s);

// max relative residual of I(r) = n r^-n int_0^r eta^(n-1) J(eta) d eta,
// with J extended by phi(p, 0) below the sampled range.
double check_IJ_relation(const MonotoneSeries& I, const MonotoneSeries& J, int n,
                         double j_origin);

// ---- gradient shrinking solitons --------------------------------------------

struct SolitonModel {
    std::string name;
    int n = 2;
    double lambda = 1.0;  // Ric + Hess f = g / (2 lambda)
    double coord_max = 0.0;
    std::function<double(double)> potential;   // normalized f
    std::function<double(double)> potential_d1;
    std::function<double(double)> scalar_curv;
    std::function<double(double)> vol_element;
};

SolitonModel make_soliton(const std::string& descriptor);  // gaussian:n= | sphere:n=

// max over samples of |lambda (|grad f|^2 + R) - f|.
double soliton_normalization_residual(const SolitonModel& s);

// Theta = int (4 pi lambda)^{-n/2} e^{-f} dmu; throws if f is not normalized.
double gaussian_density(const SolitonModel& s);

}  // namespace redgeo
