#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "redgeo/functionals.hpp"
#include "redgeo/lgeo.hpp"

using namespace redgeo;

// Parallel runs must be bit-identical to the serial reference: every node and
// sample is computed independently into its own slot.

TEST_CASE("field build: serial reference vs parallel") {
    for (const char* desc : {"sphere:n=2", "cone:c=0.5"}) {
        CAPTURE(desc);
        const FlowModel m = make_model(desc);
        FieldSpec fs;
        fs.tau_min = 0.05;
        fs.tau_max = 20.0;
        fs.per_decade = 8;
        fs.nx = 49;
        fs.route = Route::variational;
        fs.segments = 32;
        const ReducedDistanceField a = build_field_serial(m, fs);
        const ReducedDistanceField b = build_field(m, fs);
        REQUIRE(a.ell.size() == b.ell.size());
        CHECK(a.ell == b.ell);
        CHECK(a.grad_ell == b.grad_ell);
        CHECK(a.dtau_ell == b.dtau_ell);
        CHECK(a.kernel == b.kernel);
        CHECK(a.flags == b.flags);
    }
}

TEST_CASE("curve sampling: parallel equals serial") {
    const FlowModel m = make_model("sphere:n=2");
    const Weight one = weight_constant(1.0);
    FunctionalOptions par, ser;
    ser.parallel = false;
    const MonotoneSeries a = i_curve(m, one, 0.2, 5.0, 8, par);
    const MonotoneSeries b = i_curve(m, one, 0.2, 5.0, 8, ser);
    CHECK(a.value == b.value);
    const MonotoneSeries c = rv_curve(m, one, 0.1, 10.0, 8, par);
    const MonotoneSeries d = rv_curve(m, one, 0.1, 10.0, 8, ser);
    CHECK(c.value == d.value);
}

TEST_CASE("repeated runs are deterministic") {
    const FlowModel m = make_model("scaled-super:C=0.5");
    const Weight one = weight_constant(1.0);
    const MonotoneSeries a = j_curve(m, one, 0.2, 5.0, 8);
    const MonotoneSeries b = j_curve(m, one, 0.2, 5.0, 8);
    CHECK(a.value == b.value);
}
