#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "redgeo/functionals.hpp"
#include "redgeo/quadrature.hpp"

using namespace redgeo;

namespace {
const double kThetaS2 = 2.0 / std::exp(1.0);                       // 0.735758...
const double kThetaS3 = 2.0 * std::sqrt(M_PI) * std::exp(-1.5);    // 0.790993...
}  // namespace

TEST_CASE("flat reduced volume is one on every dimension and scale") {
    const Weight one = weight_constant(1.0);
    for (int n : {1, 2, 3}) {
        const FlowModel m = make_model("gaussian:n=" + std::to_string(n));
        for (double tau : {0.01, 1.0, 100.0})
            CHECK(reduced_volume(m, one, tau) == doctest::Approx(1.0).epsilon(1e-7));
    }
}

TEST_CASE("reduced volume rejects tau outside the domain") {
    const FlowModel m = make_model("gaussian:n=2");
    CHECK_THROWS_AS(reduced_volume(m, weight_constant(1.0), 0.0), std::out_of_range);
    CHECK_THROWS_AS(reduced_volume(m, weight_constant(1.0), -1.0), std::out_of_range);
}

TEST_CASE("pseudo heat ball slice geometry on the plane") {
    const FlowModel m = make_model("gaussian:n=2");
    const double r = 2.0;
    const PseudoHeatBall ball = pseudo_heat_ball(m, r);
    CHECK(ball.tau_cap == doctest::Approx(r * r / (4.0 * M_PI)));
    for (const auto& s : ball.slices) {
        // boundary satisfies ell(x_b) = threshold exactly: x_b = sqrt(4 tau L)
        if (s.threshold <= 0.0) continue;
        CHECK(s.x_b ==
              doctest::Approx(std::sqrt(4.0 * s.tau * s.threshold)).epsilon(1e-10));
        CHECK_FALSE(s.full);
    }
    // slices exist down to the tail cutoff and the top slice closes up
    CHECK(ball.slices.back().x_b < 1e-6);
}

TEST_CASE("flat I equals one in both integrand forms") {
    const FlowModel m = make_model("gaussian:n=2");
    const Weight one = weight_constant(1.0);
    for (double r : {0.3, 1.0, 7.0}) {
        CHECK(local_I_primary(m, one, r) == doctest::Approx(1.0).epsilon(1e-4));
        CHECK(local_I_alternative(m, one, r) == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("flat J equals one: closed form of the surface integral") {
    // on the plane |grad K| r^2 integrates over the level set to
    // int_0^1 log(1/u) du = 1, independent of r
    const FlowModel m = make_model("gaussian:n=2");
    const Weight one = weight_constant(1.0);
    for (double r : {0.5, 2.0})
        CHECK(local_J(m, one, r) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("independent slab oracle for static I") {
    // on static spaces the alternative integrand collapses to n/(2 tau), so
    // I(r) = r^-n int (n / 2 tau) Vol B(sqrt(2 n tau log(r^2/(4 pi tau)))) dtau;
    // evaluate that with plain quadrature, no heat-ball machinery
    const FlowModel m = make_model("cone:c=0.5");
    const double r = 3.0;
    const double tau_cap = r * r / (4.0 * M_PI);
    const int n = 2;
    const double oracle = integrate_simpson(
        [&](double u) {
            const double tau = tau_cap * std::exp(-u);
            const double L = 0.5 * n * u;
            return 0.5 * n * ball_volume(m, std::sqrt(4.0 * tau * L)) / std::pow(r, n);
        },
        0.0, 60.0, 4000);
    CHECK(local_I_alternative(m, weight_constant(1.0), r) ==
          doctest::Approx(oracle).epsilon(1e-4));
    CHECK(local_I_primary(m, weight_constant(1.0), r) == doctest::Approx(oracle).epsilon(1e-4));
}

TEST_CASE("monotone series checker flags increases") {
    MonotoneSeries s;
    s.arg = {1.0, 2.0, 4.0};
    s.value = {1.0, 0.9, 0.95};
    s.flag = {0, 0, 0};
    const MonotonicityReport rep = check_monotone(s, 1e-3);
    CHECK(rep.violations == 1);
    CHECK(rep.worst_rel_increase == doctest::Approx(0.05 / 0.9));
    CHECK_FALSE(rep.pass);
    CHECK(check_monotone(s, 0.1).pass);
}

TEST_CASE("limit estimator recovers a power-law tail") {
    MonotoneSeries s;
    s.quantity = "synthetic";
    for (double x : geometric_grid(1.0, 1000.0, 8)) {
        s.arg.push_back(x);
        s.value.push_back(0.5 + 0.8 / std::sqrt(x));
        s.flag.push_back(0);
    }
    const LimitEstimate est = estimate_limit(s);
    CHECK(est.converged);
    CHECK(est.value == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(est.exponent == doctest::Approx(0.5).epsilon(0.05));
    CHECK(std::abs(est.value - 0.5) <= est.error + 1e-12);
}

TEST_CASE("limit estimator needs two decades") {
    MonotoneSeries s;
    for (double x : geometric_grid(1.0, 5.0, 8)) {
        s.arg.push_back(x);
        s.value.push_back(1.0 / x);
        s.flag.push_back(0);
    }
    CHECK_THROWS_AS(estimate_limit(s), std::invalid_argument);
}

TEST_CASE("I-J relation closes on synthetic data") {
    // J(eta) = exp(-eta^2) gives I(r) = (1 - exp(-r^2)) / r^2 for n = 2
    const int n = 2;
    MonotoneSeries I, J;
    for (double x : geometric_grid(0.05, 10.0, 32)) {
        J.arg.push_back(x);
        J.value.push_back(std::exp(-x * x));
        J.flag.push_back(0);
        I.arg.push_back(x);
        I.value.push_back((1.0 - std::exp(-x * x)) / (x * x));  // closed form
        I.flag.push_back(0);
    }
    CHECK(check_IJ_relation(I, J, n, 1.0) < 2e-3);
}

TEST_CASE("cone reduced volume approaches the asymptotic volume ratio") {
    const FlowModel m = make_model("cone:c=0.5");
    const Weight one = weight_constant(1.0);
    // apex expansion: rv(tau) ~ c + (1-c) sqrt(pi) / (2 sqrt(tau))
    for (double tau : {100.0, 1000.0}) {
        const double expect = 0.5 + 0.5 * std::sqrt(M_PI) / (2.0 * std::sqrt(tau));
        CHECK(reduced_volume(m, one, tau) == doctest::Approx(expect).epsilon(2e-2));
    }
}

TEST_CASE("sphere reduced volume approaches the soliton density") {
    const FlowModel m = make_model("sphere:n=2");
    const Weight one = weight_constant(1.0);
    const double v1 = reduced_volume(m, one, 1e3);
    const double v2 = reduced_volume(m, one, 1e5);
    CHECK(std::abs(v2 - kThetaS2) < std::abs(v1 - kThetaS2));
    CHECK(v2 == doctest::Approx(kThetaS2).epsilon(2e-3));
}

TEST_CASE("soliton densities against closed forms") {
    const SolitonModel flat = make_soliton("gaussian:n=3");
    CHECK(soliton_normalization_residual(flat) < 1e-12);
    CHECK(gaussian_density(flat) == doctest::Approx(1.0).epsilon(1e-8));

    const SolitonModel s2 = make_soliton("sphere:n=2");
    CHECK(s2.lambda == doctest::Approx(0.5));
    CHECK(soliton_normalization_residual(s2) < 1e-12);
    CHECK(gaussian_density(s2) == doctest::Approx(kThetaS2).epsilon(1e-8));

    const SolitonModel s3 = make_soliton("sphere:n=3");
    CHECK(s3.lambda == doctest::Approx(0.25));
    CHECK(gaussian_density(s3) == doctest::Approx(kThetaS3).epsilon(1e-8));
}

TEST_CASE("density guard rejects an unnormalized potential") {
    SolitonModel s = make_soliton("sphere:n=2");
    auto base = s.potential;
    s.potential = [base](double x) { return base(x) + 0.3; };
    CHECK_THROWS_AS(gaussian_density(s), std::invalid_argument);
}

TEST_CASE("product functionals factor correctly") {
    const FlowModel prod = make_model("s2xr");
    const FlowModel sph = make_model("sphere:n=2");
    const Weight one = weight_constant(1.0);
    for (double tau : {1.0, 10.0})
        CHECK(reduced_volume(prod, one, tau) ==
              doctest::Approx(reduced_volume(sph, one, tau)).epsilon(1e-10));
    // small r recovers the base value in all three local quantities
    CHECK(local_I_primary(prod, one, 0.5) == doctest::Approx(1.0).epsilon(5e-3));
    CHECK(local_I_alternative(prod, one, 0.5) == doctest::Approx(1.0).epsilon(5e-3));
    CHECK(local_J(prod, one, 0.5) == doctest::Approx(1.0).epsilon(5e-3));
    // non-constant weights are rejected on products
    const FlowModel line = make_model("gaussian:n=1");
    Weight hk = weight_shifted_heat_kernel(line, 0.0, 50.0);
    CHECK_THROWS_AS(local_I_primary(prod, hk, 1.0), std::invalid_argument);
}

TEST_CASE("half resolution stays within widened tolerances") {
    const FlowModel m = make_model("sphere:n=2");
    const Weight one = weight_constant(1.0);
    FunctionalOptions coarse;
    coarse.n_space = 300;
    coarse.n_tau = 256;
    for (double r : {0.5, 3.0}) {
        const double fine = local_I_primary(m, one, r);
        CHECK(local_I_primary(m, one, r, coarse) == doctest::Approx(fine).epsilon(1e-2));
    }
    for (double tau : {1.0, 30.0}) {
        const double fine = reduced_volume(m, one, tau);
        CHECK(reduced_volume(m, one, tau, coarse) == doctest::Approx(fine).epsilon(1e-2));
    }
}
