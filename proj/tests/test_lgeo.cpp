#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "redgeo/lgeo.hpp"
#include "redgeo/quadrature.hpp"

using namespace redgeo;

// Frozen by hand, independent of the implementation:
//  - flat straight path p=0 -> q=2 at tau=1: L = int_0^1 sqrt(s) |v|^2 ds with
//    the s-parametrization giving L = 2, so ell = 1.
//  - sphere constant path at tau=1: L = int_0^1 sqrt(s) 2/(1+2s) ds = 0.648960...
//  - sphere ell(pi/2, 1) = [ (pi/2)^2/A + B ] / 2 with
//    A = sqrt(2) arctan(sqrt 2) = 1.3510217..., B = 2 - A.
namespace {
constexpr double kSphereA = 1.3510217177120799;
constexpr double kSphereB = 2.0 - kSphereA;
}  // namespace

TEST_CASE("flat L-length of the straight path") {
    const FlowModel m = make_model("gaussian:n=2");
    const PathDiscretization path = straight_path(0.0, 2.0, 1.0, 2048);
    CHECK(l_length(m, path) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(reduced_distance(m, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sphere L-length of the constant path is the trace integral") {
    const FlowModel m = make_model("sphere:n=2");
    const PathDiscretization path = straight_path(0.0, 0.0, 1.0, 2048);
    CHECK(l_length(m, path) == doctest::Approx(kSphereB).epsilon(1e-6));
}

TEST_CASE("sphere reduced distance against the closed-form integrals") {
    const FlowModel m = make_model("sphere:n=2");
    CHECK(conformal_kinetic_integral(m, 1.0) == doctest::Approx(kSphereA).epsilon(1e-8));
    CHECK(conformal_trace_integral(m, 1.0) == doctest::Approx(kSphereB).epsilon(1e-8));
    const double expected = 0.5 * (M_PI * M_PI / 4.0 / kSphereA + kSphereB);
    CHECK(reduced_distance(m, M_PI / 2.0, 1.0) == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("product reduced distance adds over factors") {
    const FlowModel prod = make_model("s2xr");
    const FlowModel sph = make_model("sphere:n=2");
    const FlowModel line = make_model("gaussian:n=1");
    const double expected =
        reduced_distance(sph, M_PI / 2.0, 1.0) + reduced_distance(line, 1.0, 1.0);
    CHECK(reduced_distance_product(prod, {M_PI / 2.0, 1.0}, 1.0) ==
          doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("variational route agrees with the exact routes") {
    VariationalOptions vo;
    vo.segments = 128;
    const FlowModel flat = make_model("gaussian:n=2");
    CHECK(reduced_distance_variational(flat, 2.0, 1.0, vo).ell ==
          doctest::Approx(1.0).epsilon(1e-8));
    const FlowModel sph = make_model("sphere:n=2");
    const auto r = reduced_distance_variational(sph, 2.0, 1.0, vo);
    CHECK(r.converged);
    CHECK_FALSE(r.below_lower_bound);
    CHECK(r.ell == doctest::Approx(reduced_distance_conformal(sph, 2.0, 1.0)).epsilon(1e-5));
}

TEST_CASE("tau ell approaches d^2/4 as tau -> 0") {
    const FlowModel m = make_model("sphere:n=2");
    const double q = 1.0;
    double prev_gap = 1e300;
    for (double tau : {1e-2, 1e-3, 1e-4}) {
        const double gap = std::abs(tau * reduced_distance(m, q, tau) - q * q / 4.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-4);
}

TEST_CASE("static models sit exactly on the lower bound") {
    for (const char* desc : {"gaussian:n=3", "cone:c=0.5"}) {
        const FlowModel m = make_model(desc);
        for (double q : {0.5, 2.0})
            for (double tau : {0.1, 10.0})
                CHECK(reduced_distance(m, q, tau) ==
                      doctest::Approx(ell_lower_bound(m, q, tau)).epsilon(1e-12));
    }
}

TEST_CASE("derivatives match finite differences") {
    for (const char* desc : {"sphere:n=2", "scaled-super:C=0.5", "cone:c=0.9"}) {
        CAPTURE(desc);
        const FlowModel m = make_model(desc);
        const double q = 1.2, tau = 2.0;
        const EllDerivs d = ell_derivs(m, q, tau);
        const double ht = 1e-5 * tau;
        const double fd_t =
            (reduced_distance(m, q, tau + ht) - reduced_distance(m, q, tau - ht)) / (2.0 * ht);
        CHECK(d.dtau == doctest::Approx(fd_t).epsilon(1e-6));
        const double hq = 1e-6;
        const double fd_q =
            (reduced_distance(m, q + hq, tau) - reduced_distance(m, q - hq, tau)) / (2.0 * hq);
        CHECK(d.grad_norm == doctest::Approx(std::abs(fd_q) / m.metric_scale(tau)).epsilon(1e-6));
    }
}

TEST_CASE("static dtau identity ell = -tau dtau(ell)") {
    const FlowModel m = make_model("cone:c=0.5");
    const EllDerivs d = ell_derivs(m, 1.7, 3.0);
    CHECK(d.ell == doctest::Approx(-3.0 * d.dtau).epsilon(1e-12));
}

TEST_CASE("field grid carries consistent kernel values") {
    const FlowModel m = make_model("sphere:n=2");
    FieldSpec fs;
    fs.tau_min = 0.1;
    fs.tau_max = 10.0;
    fs.per_decade = 8;
    fs.nx = 33;
    const ReducedDistanceField f = build_field(m, fs);
    REQUIRE(f.tau.size() == 17);
    for (size_t it = 0; it < f.tau.size(); it += 4)
        for (size_t ix = 0; ix < f.x.size(); ix += 8) {
            const size_t k = f.idx(it, ix);
            const double expect =
                std::pow(4.0 * M_PI * f.tau[it], -1.0) * std::exp(-f.ell[k]);
            CHECK(f.kernel[k] == doctest::Approx(expect).epsilon(1e-12));
        }
    CHECK(check_lower_bound(f, m).pass);
    const GradientBoundReport gb = check_gradient_bound(f, m);
    CHECK(gb.finite);
}

TEST_CASE("convergence order of the variational route is about two") {
    const FlowModel m = make_model("sphere:n=2");
    const double exact = reduced_distance_conformal(m, 2.0, 1.0);
    double e_prev = 0.0;
    std::vector<double> orders;
    for (int N : {32, 64, 128}) {
        VariationalOptions vo;
        vo.segments = N;
        const double e = std::abs(reduced_distance_variational(m, 2.0, 1.0, vo).ell - exact);
        if (e_prev > 0.0) orders.push_back(std::log2(e_prev / e));
        e_prev = e;
    }
    for (double o : orders) CHECK(o > 1.8);
}
