#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "redgeo/quadrature.hpp"

using namespace redgeo;

TEST_CASE("simpson integrates cubics exactly") {
    auto f = [](double x) { return x * x * x - 2.0 * x + 1.0; };
    CHECK(integrate_simpson(f, 0.0, 2.0, 4) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("simpson odd interval count is rounded up") {
    auto f = [](double x) { return x * x; };
    CHECK(integrate_simpson(f, 0.0, 1.0, 5) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("checked simpson reports a sane error estimate") {
    auto f = [](double x) { return std::exp(-x * x); };
    const QuadResult q = integrate_simpson_checked(f, 0.0, 3.0, 200);
    CHECK(q.value == doctest::Approx(0.5 * std::sqrt(M_PI) * std::erf(3.0)).epsilon(1e-10));
    CHECK(q.error < 1e-8);
}

TEST_CASE("trapezoid on tabulated data") {
    std::vector<double> x = {0.0, 0.5, 1.0, 2.0};
    std::vector<double> y = {0.0, 0.5, 1.0, 2.0};
    CHECK(integrate_trapezoid(x, y) == doctest::Approx(2.0));
}

TEST_CASE("geometric grid endpoints and spacing") {
    const auto g = geometric_grid(0.01, 100.0, 8);
    CHECK(g.front() == doctest::Approx(0.01));
    CHECK(g.back() == doctest::Approx(100.0));
    CHECK(g.size() == 33);
    for (size_t i = 1; i < g.size(); ++i)
        CHECK(g[i] / g[i - 1] == doctest::Approx(std::pow(10.0, 1.0 / 8.0)).epsilon(1e-12));
}

TEST_CASE("unit ball volumes and sphere areas") {
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
    CHECK(unit_ball_volume(2) == doctest::Approx(M_PI));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0));
    CHECK(unit_sphere_area(0) == doctest::Approx(2.0));
    CHECK(unit_sphere_area(1) == doctest::Approx(2.0 * M_PI));
    CHECK(unit_sphere_area(2) == doctest::Approx(4.0 * M_PI));
}
