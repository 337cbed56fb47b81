#pragma once

#include <functional>
#include <vector>

namespace redgeo {

using Fn1 = std::function<double(double)>;

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // Richardson estimate |I_n - I_{n/2}|
};

// Composite Simpson on [a, b] with n intervals (n is rounded up to even).
double integrate_simpson(const Fn1& f, double a, double b, int n);

// Simpson at full and half resolution; error is the Richardson difference.
QuadResult integrate_simpson_checked(const Fn1& f, double a, double b, int n);

// Trapezoid on tabulated samples (x strictly increasing).
double integrate_trapezoid(const std::vector<double>& x, const std::vector<double>& y);

// Geometric grid from lo to hi with points_per_decade samples per decade,
// endpoints included.
std::vector<double> geometric_grid(double lo, double hi, int points_per_decade);

std::vector<double> linspace(double lo, double hi, int count);

// Volume of the Euclidean unit n-ball and area of the unit (n-1)-sphere.
double unit_ball_volume(int n);
double unit_sphere_area(int n_minus_1);

}  // namespace redgeo
