#pragma once

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace redgeo {

using Fn2 = std::function<double(double, double)>;  // (coord, tau)
using FnTau = std::function<double(double)>;

enum class Kind { gaussian, static_warped, conformal_round, scaled_super, product };

std::string kind_name(Kind k);

// Geodesic-ball data around an off-axis base point, tabulated by fast
// marching on the (rho, theta) chart of a warped surface. Spatial integrals
// against d(mu) are evaluated as Stieltjes sums over the mass bins.
struct RadialProfile {
    std::vector<double> s_edges;   // bin edges, size bins+1
    std::vector<double> s_center;  // measure-weighted center per bin
    std::vector<double> mass;      // d(mu)-mass per bin
    std::vector<double> cum_mass;  // Vol B(p, s_edges[i+1])

    double volume_at(double s) const;  // Vol B(p, s), linear in s within a bin
    double area_at(double s) const;    // smoothed d/ds Vol
    double s_max() const { return s_edges.empty() ? 0.0 : s_edges.back(); }
};

// A symmetry-reduced ancient (super) Ricci flow. The spatial coordinate is
// the g(0)-geodesic distance from the base point, so for every static model
// the reduced distance is exactly coord^2 / (4 tau) in this chart.
struct FlowModel {
    std::string name;
    Kind kind = Kind::gaussian;
    int n = 2;
    double tau_end = std::numeric_limits<double>::infinity();
    double coord_max = std::numeric_limits<double>::infinity();  // pi for spheres
    double kappa = 0.0;            // dg/dtau >= -kappa g
    double base_offset = 0.0;      // distance of base point from the apex/pole

    FnTau a;        // conformal scale, a(0) = 1 (identically 1 for static kinds)
    FnTau a_prime;

    FnTau warp;     // phi_w(rho), static_warped only
    FnTau warp_d1;
    FnTau warp_d2;

    Fn2 trace_h;    // H(q, tau)
    Fn2 trace_h_dtau;  // analytic dH/dtau when closed-form, else null (FD fallback)
    Fn2 div_h;      // radial component of div h
    Fn2 h_norm;     // |h|(q, tau)
    FnTau c1_control;
    Fn2 super_ricci_gap;  // largest eigenvalue of (dg/dtau - 2 Ric) at (q, tau)

    Fn2 vol_element;      // w with d(mu)_{g(tau)} = w(coord, tau) d(coord)
    FnTau metric_scale;   // |d(coord)|_{g(tau)}: 1 for static, sqrt(a) conformal

    std::vector<FlowModel> factors;  // product kind only
    std::shared_ptr<RadialProfile> profile;  // off-axis warped base only

    bool is_static() const { return kind == Kind::gaussian || kind == Kind::static_warped; }
    bool is_conformal() const { return kind == Kind::conformal_round || kind == Kind::scaled_super; }
    bool off_axis() const { return profile != nullptr; }
};

struct ModelSpec {
    std::string name;  // gaussian | cone | sphere | scaled-super | s2xr
    std::map<std::string, double> params;
};

// Parses "name" or "name:k=v,k=v", e.g. "cone:c=0.5,base=2".
ModelSpec parse_model_spec(const std::string& descriptor);

FlowModel make_model(const ModelSpec& spec);
FlowModel make_model(const std::string& descriptor);

// Default catalog descriptors exercised by the checking suites.
std::vector<std::string> catalog();

// ---- structural checkers ----------------------------------------------------

struct ResidualReport {
    double max_residual = 0.0;
    bool pass = false;
    std::string detail;
};

struct SampleGrid {
    std::vector<double> coord;
    std::vector<double> tau;
};

SampleGrid default_sample_grid(const FlowModel& m);

// max over samples of the largest eigenvalue of (dg/dtau - 2 Ric).
ResidualReport check_super_ricci(const FlowModel& m, const SampleGrid& g, double tol = 1e-10);

struct AssumptionReport {
    double bianchi_residual = 0.0;    // |2 div h - grad H|
    double heat_like_residual = 0.0;  // [dH/dtau + Lap H + 2|h|^2]_+
    bool pass = false;
    std::string detail;
};

// Finite-difference verification of the second-Bianchi and heat-like
// relations on the sample grid. Throws if the grid cannot host the stencil.
AssumptionReport check_assumption(const FlowModel& m, const SampleGrid& g, double tol = 1e-6);

// Sampled positivity of H (ancient super Ricci flows).
ResidualReport check_trace_nonnegative(const FlowModel& m, const SampleGrid& g, double tol = 1e-12);

// ---- static geometry --------------------------------------------------------

// Geodesic distance in g(tau) between two chart coordinates (points on the
// generator ray / great circle through the base point).
double distance(const FlowModel& m, double q1, double q2, double tau);

// Product models: factor-wise Pythagorean combination.
double distance_product(const FlowModel& m, const std::vector<double>& q1,
                        const std::vector<double>& q2, double tau);

// Vol B(p, s) in the fixed metric of a static model.
double ball_volume(const FlowModel& m, double s);

struct AvrEstimate {
    double ratio_at_smax = 0.0;
    double limit = 0.0;
    bool converged = false;
};

// Bishop-Gromov ratio at s_max plus a tail extrapolation.
AvrEstimate asymptotic_volume_ratio(const FlowModel& m, double s_max);

// Fast-marching distance table for a warped surface with base point at
// geodesic distance base_offset from the apex.
std::shared_ptr<RadialProfile> build_warped_profile(const FnTau& warp, double base_offset,
                                                    double s_max, int n_rho, int n_theta,
                                                    int bins);

}  // namespace redgeo
