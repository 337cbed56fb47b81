// Compares the serial reference field build against the OpenMP build and
// reports speedup; the two must agree bit for bit.
#include <chrono>
#include <cstdio>
#include <string>

#include "redgeo/lgeo.hpp"
#include "redgeo/model.hpp"

using namespace redgeo;

namespace {

template <typename F>
double timed(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    const std::string desc = argc > 1 ? argv[1] : "sphere:n=2";
    const FlowModel m = make_model(desc);

    FieldSpec fs;
    fs.tau_min = 0.1;
    fs.tau_max = 10.0;
    fs.per_decade = 8;
    fs.nx = 65;
    fs.route = Route::variational;
    fs.segments = 32;

    ReducedDistanceField serial, parallel;
    const double ts = timed([&] { serial = build_field_serial(m, fs); });
    const double tp = timed([&] { parallel = build_field(m, fs); });

    bool identical = serial.ell == parallel.ell && serial.grad_ell == parallel.grad_ell &&
                     serial.dtau_ell == parallel.dtau_ell && serial.kernel == parallel.kernel;

    std::printf("model %s, %zu x %zu nodes, variational route\n", desc.c_str(),
                serial.tau.size(), serial.x.size());
    std::printf("serial   %.3fs\n", ts);
    std::printf("parallel %.3fs  (speedup %.2fx)\n", tp, ts / tp);
    std::printf("bit-identical: %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
