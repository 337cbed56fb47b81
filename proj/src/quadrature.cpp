#include "redgeo/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace redgeo {

double integrate_simpson(const Fn1& f, double a, double b, int n) {
    if (b <= a) return 0.0;
    if (n < 2) n = 2;
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double odd = 0.0, even = 0.0;
    for (int i = 1; i < n; i += 2) odd += f(a + i * h);
    for (int i = 2; i < n; i += 2) even += f(a + i * h);
    return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

QuadResult integrate_simpson_checked(const Fn1& f, double a, double b, int n) {
    QuadResult r;
    r.value = integrate_simpson(f, a, b, n);
    const double coarse = integrate_simpson(f, a, b, n / 2);
    r.error = std::abs(r.value - coarse);
    return r;
}

double integrate_trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("trapezoid: size mismatch");
    double s = 0.0;
    for (size_t i = 1; i < x.size(); ++i) s += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    return s;
}

std::vector<double> geometric_grid(double lo, double hi, int points_per_decade) {
    if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("geometric_grid: need 0 < lo < hi");
    if (points_per_decade < 1) throw std::invalid_argument("geometric_grid: points_per_decade < 1");
    const double decades = std::log10(hi / lo);
    const int count = std::max(2, static_cast<int>(std::ceil(decades * points_per_decade)) + 1);
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i)
        g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 2) return {lo};
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) g[i] = lo + (hi - lo) * i / (count - 1);
    return g;
}

double unit_ball_volume(int n) {
    return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double unit_sphere_area(int n_minus_1) {
    const int n = n_minus_1 + 1;
    return n * unit_ball_volume(n);
}

}  // namespace redgeo
