#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "redgeo/model.hpp"
#include "redgeo/quadrature.hpp"

using namespace redgeo;

TEST_CASE("descriptor parsing") {
    const ModelSpec s = parse_model_spec("cone:c=0.5,base=2");
    CHECK(s.name == "cone");
    CHECK(s.params.at("c") == doctest::Approx(0.5));
    CHECK(s.params.at("base") == doctest::Approx(2.0));
    CHECK_THROWS_AS(make_model("nosuchmodel"), std::invalid_argument);
}

TEST_CASE("catalog models all resolve and self-check") {
    for (const auto& desc : catalog()) {
        CAPTURE(desc);
        const FlowModel m = make_model(desc);
        std::vector<const FlowModel*> parts;
        if (m.kind == Kind::product)
            for (const auto& f : m.factors) parts.push_back(&f);
        else
            parts.push_back(&m);
        for (const FlowModel* p : parts) {
            const SampleGrid g = default_sample_grid(*p);
            CHECK(check_super_ricci(*p, g).pass);
            CHECK(check_assumption(*p, g).pass);
            CHECK(check_trace_nonnegative(*p, g).pass);
        }
    }
}

TEST_CASE("scaled super flow has the expected strict margin") {
    const FlowModel m = make_model("scaled-super:C=0.5");
    // largest eigenvalue of dg/dtau - 2 Ric equals 2(C-1)/(1+2C tau) < 0
    for (double tau : {0.1, 1.0, 10.0}) {
        const double expected = 2.0 * (0.5 - 1.0) / (1.0 + tau);
        CHECK(m.super_ricci_gap(0.5, tau) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("sphere distances scale with the conformal factor") {
    const FlowModel m = make_model("sphere:n=2");
    // g(tau) = (1 + 2 tau) g0, so d_tau = sqrt(1 + 2 tau) * d0
    CHECK(distance(m, 0.0, M_PI, 1.5) == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
    CHECK(distance(m, 0.3, 1.3, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("product distance is factor-pythagorean") {
    const FlowModel m = make_model("s2xr");
    const double d = distance_product(m, {0.0, 0.0}, {0.6, 0.8}, 0.0);
    CHECK(d == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cone ball volume and asymptotic ratio") {
    const FlowModel m = make_model("cone:c=0.5");
    // near the apex the warp is smooth, so small balls are almost Euclidean
    CHECK(ball_volume(m, 0.05) == doctest::Approx(M_PI * 0.05 * 0.05).epsilon(2e-2));
    const AvrEstimate avr = asymptotic_volume_ratio(m, 400.0);
    CHECK(avr.converged);
    CHECK(avr.limit == doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("off-axis profile is squeezed by the apex volumes") {
    const double base = 2.0;
    const FlowModel off = make_model("cone:c=0.5,base=2,smax=40");
    const FlowModel apex = make_model("cone:c=0.5");
    // triangle inequality: V_apex(s - d0) <= V_p(s) <= V_apex(s + d0)
    for (double s : {4.0, 10.0, 30.0}) {
        const double v = off.profile->volume_at(s);
        CHECK(v >= ball_volume(apex, s - base) * 0.98);
        CHECK(v <= ball_volume(apex, s + base) * 1.02);
    }
}

TEST_CASE("off-axis profile mass matches the smooth near field") {
    const FlowModel off = make_model("cone:c=0.5,base=2,smax=40");
    // small geodesic discs around a smooth point are nearly Euclidean
    const double s = 0.5;
    CHECK(off.profile->volume_at(s) == doctest::Approx(M_PI * s * s).epsilon(5e-2));
}

TEST_CASE("bishop gromov ratio is non-increasing on cones") {
    const FlowModel m = make_model("cone:c=0.9");
    double prev = 1e300;
    for (double s = 0.5; s < 300.0; s *= 1.5) {
        const double ratio = ball_volume(m, s) / (unit_ball_volume(2) * s * s);
        CHECK(ratio <= prev + 1e-12);
        prev = ratio;
    }
}

TEST_CASE("trace of h on the sphere follows the shrinking factor") {
    const FlowModel m = make_model("sphere:n=2");
    for (double tau : {0.01, 1.0, 50.0})
        CHECK(m.trace_h(1.0, tau) == doctest::Approx(2.0 / (1.0 + 2.0 * tau)).epsilon(1e-12));
}
