#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "redgeo/model.hpp"

namespace redgeo {

// Space-time path discretized in s = sqrt(tau); removes the sqrt(tau)
// integrand singularity at tau = 0.
struct PathDiscretization {
    double tau_bar = 1.0;
    std::vector<double> pos;  // N+1 node coordinates, endpoints pinned

    int segments() const { return static_cast<int>(pos.size()) - 1; }
};

PathDiscretization straight_path(double p, double q, double tau_bar, int segments);

// Discrete L-length in the s-parametrization: midpoint rule on
// integral of [ 1/2 |dgamma/ds|^2 + 2 s^2 H ] ds over [0, sqrt(tau_bar)].
double l_length(const FlowModel& m, const PathDiscretization& path);

// Static models: ell = d(p, q)^2 / (4 tau).
double reduced_distance_closed_form(const FlowModel& m, double q, double tau_bar);

// Conformally scaled models g(tau) = a(tau) g0: the speed profile is
// minimized exactly (Cauchy-Schwarz), leaving two scalar tau-integrals.
double reduced_distance_conformal(const FlowModel& m, double q, double tau_bar);

// The two tau-integrals of the conformal route.
double conformal_kinetic_integral(const FlowModel& m, double tau_bar);  // int 1/(sqrt(s) a(s))
double conformal_trace_integral(const FlowModel& m, double tau_bar);    // int sqrt(s) H(s)

struct VariationalOptions {
    int segments = 64;
    int max_sweeps = 500;
    double rel_tol = 1e-10;
};

struct VariationalResult {
    double ell = 0.0;
    double l_length = 0.0;
    bool converged = false;
    bool below_lower_bound = false;  // signals a bug, value is not clamped
    int sweeps = 0;
    PathDiscretization path;
};

// Node-wise descent on the discrete L functional from the g(0)-geodesic
// initial path.
VariationalResult reduced_distance_variational(const FlowModel& m, double q, double tau_bar,
                                               const VariationalOptions& opt = {});

enum class Route { automatic, closed_form, conformal, variational };

// Cheapest exact route for the model (closed form > conformal > variational).
double reduced_distance(const FlowModel& m, double q, double tau_bar,
                        Route route = Route::automatic);

// Product models: the L functional decouples, ell adds over factors.
double reduced_distance_product(const FlowModel& m, const std::vector<double>& q,
                                double tau_bar, Route route = Route::automatic);

// Pointwise value and derivatives along the exact routes.
struct EllDerivs {
    double ell = 0.0;
    double grad_norm = 0.0;  // |grad ell|_{g(tau)}
    double dtau = 0.0;
};

EllDerivs ell_derivs(const FlowModel& m, double q, double tau_bar);

// Prop-2.9-style lower bound at (q, tau) in the g(0) chart.
double ell_lower_bound(const FlowModel& m, double q, double tau_bar);

// ---- gridded field ---------------------------------------------------------

struct FieldSpec {
    double tau_min = 0.01;
    double tau_max = 100.0;
    int per_decade = 32;
    int nx = 129;
    double x_max = 0.0;     // 0 = auto from ell_cut
    double ell_cut = 40.0;  // spatial truncation level for auto x_max
    Route route = Route::automatic;
    int segments = 64;  // variational route
    bool parallel = true;
};

struct ReducedDistanceField {
    int n = 0;
    std::vector<double> tau;
    std::vector<double> x;
    std::vector<double> ell, grad_ell, dtau_ell, kernel;
    std::vector<uint8_t> flags;  // 1 = route did not converge at the node

    size_t idx(size_t it, size_t ix) const { return it * x.size() + ix; }
    double ell_at(size_t it, size_t ix) const { return ell[idx(it, ix)]; }
};

ReducedDistanceField build_field(const FlowModel& m, const FieldSpec& spec);
ReducedDistanceField build_field_serial(const FlowModel& m, const FieldSpec& spec);

ResidualReport check_lower_bound(const ReducedDistanceField& f, const FlowModel& m,
                                 double tol = 1e-9);

struct GradientBoundReport {
    std::vector<double> tau;
    std::vector<double> kstar;  // empirical K*(tau)
    double max_kstar = 0.0;
    bool finite = false;
};

GradientBoundReport check_gradient_bound(const ReducedDistanceField& f, const FlowModel& m);

}  // namespace redgeo
