#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nestlab/renorm.hpp"

using namespace nestlab;

namespace {
PrecisionContext ctx256() { return PrecisionContext::make(256, "1e-40"); }

const PeriodicOrbit* find_cycle(const std::vector<PeriodicOrbit>& cycles, double near, int period) {
    for (const auto& c : cycles) {
        if (c.period != period) continue;
        for (const auto& p : c.points)
            if (std::abs(p.to_double() - near) < 1e-9) return &c;
    }
    return nullptr;
}
} // namespace

TEST_CASE("fixed points of the Chebyshev map") {
    auto ctx = ctx256();
    QuadraticMap m(2.0, ctx);
    auto cycles = periodic_points(m, 1, ctx.tol);
    REQUIRE(cycles.size() == 2);
    const PeriodicOrbit* half = find_cycle(cycles, 0.5, 1);
    const PeriodicOrbit* minus1 = find_cycle(cycles, -1.0, 1);
    REQUIRE(half);
    REQUIRE(minus1);
    CHECK(half->multiplier.to_double() == doctest::Approx(-2.0));
    CHECK(minus1->multiplier.to_double() == doctest::Approx(4.0));
}

TEST_CASE("fixed points at the sink parameter and the parabolic moment") {
    auto ctx = ctx256();
    auto cycles = periodic_points(QuadraticMap(0.75, ctx), 1, ctx.tol);
    const PeriodicOrbit* sink = find_cycle(cycles, -1.0 / 3.0, 1);
    REQUIRE(sink);
    CHECK(sink->multiplier.to_double() == doctest::Approx(0.5));
    const PeriodicOrbit* bnd = find_cycle(cycles, -1.0, 1);
    REQUIRE(bnd);
    CHECK(bnd->multiplier.to_double() == doctest::Approx(1.5));

    auto pd = periodic_points(QuadraticMap(1.5, ctx), 1, ctx.tol);
    const PeriodicOrbit* interior = find_cycle(pd, 1.0 / 3.0, 1);
    REQUIRE(interior);
    CHECK(interior->multiplier.to_double() == doctest::Approx(-1.0));
}

TEST_CASE("cycle residuals and multiplier consistency along the cycle") {
    auto ctx = ctx256();
    QuadraticMap m(1.93, ctx);
    auto cycles = periodic_points(m, 4, ctx.tol);
    CHECK(!cycles.empty());
    for (const auto& c : cycles) {
        for (const auto& p : c.points)
            CHECK(abs(m.iterate(p, c.period) - p) <= ctx.tol * 10.0);
        // multiplier from any point of the cycle agrees (chain rule)
        for (const auto& p : c.points) {
            Real prod(1.0, ctx.bits);
            Real y = p;
            for (int k = 0; k < c.period; ++k) {
                prod *= m.deriv(y);
                y = m.eval(y);
            }
            CHECK(abs(prod - c.multiplier) <= abs(c.multiplier) * ctx.real("1e-9"));
        }
    }
}

TEST_CASE("orientation reversing fixed point closed forms") {
    auto ctx = ctx256();
    auto p2 = orientation_reversing_fixed_point(QuadraticMap(2.0, ctx), 0);
    CHECK(p2.p.to_double() == doctest::Approx(0.5));
    auto p175 = orientation_reversing_fixed_point(QuadraticMap(1.75, ctx), 0);
    CHECK(p175.p.to_double() == doctest::Approx(3.0 / 7.0));
    CHECK_THROWS_AS(orientation_reversing_fixed_point(QuadraticMap(1.2, ctx), 0), NotInDelta);
}

TEST_CASE("renormalization window of period 2") {
    auto ctx = ctx256();
    // a=1.6: inside the period-2 window, T = [-p0, p0]
    auto recs = detect_renormalizations(QuadraticMap(1.6, ctx), 8, ctx.tol);
    REQUIRE(recs.size() >= 1);
    CHECK(recs[0].period == 2);
    double p0 = (1.6 - 1.0) / 1.6;
    CHECK(recs[0].T.hi.to_double() == doctest::Approx(p0));
    // containment oracle f^2(T) in T via dense grid
    QuadraticMap m(1.6, ctx);
    for (int i = 0; i <= 64; ++i) {
        double x = -p0 + 2.0 * p0 * i / 64.0;
        Real y = m.iterate(ctx.real(x), 2);
        CHECK(y.to_double() >= -p0 - 1e-9);
        CHECK(y.to_double() <= p0 + 1e-9);
    }
    // hatT = [f^4(0), f^2(0)] ordered, inside T
    CHECK(recs[0].hatT.lo >= recs[0].T.lo);
    CHECK(recs[0].hatT.hi <= recs[0].T.hi);
}

TEST_CASE("no renormalization at a=1.95 and at the sink a=0.75") {
    auto ctx = ctx256();
    CHECK(detect_renormalizations(QuadraticMap(1.95, ctx), 8, ctx.tol).empty());
    CHECK(detect_renormalizations(QuadraticMap(0.75, ctx), 6, ctx.tol).empty());
}

TEST_CASE("doubling cascade periods divide and intervals nest") {
    auto ctx = ctx256();
    // a=1.77 (atil ~ 1.363): inside the period-4 window of the cascade
    auto recs = detect_renormalizations(QuadraticMap(1.77, ctx), 8, ctx.tol);
    REQUIRE(recs.size() >= 2);
    for (size_t i = 0; i + 1 < recs.size(); ++i) {
        CHECK(recs[i + 1].period % recs[i].period == 0);
        CHECK(recs[i + 1].T.lo >= recs[i].T.lo);
        CHECK(recs[i + 1].T.hi <= recs[i].T.hi);
    }
}

TEST_CASE("classification closed forms") {
    auto ctx = ctx256();
    Classification sink = classify(QuadraticMap(0.75, ctx), 4096, 64, ctx.tol);
    CHECK(sink.tag == Classification::Tag::RegularSink);
    CHECK(sink.period == 1);
    CHECK(sink.multiplier == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(std::abs(sink.sink_point.to_double() + 1.0 / 3.0) < 1e-12);

    Real golden = (sqrt(ctx.real(5.0)) + 1.0) * 0.5;
    Classification super = classify(QuadraticMap(golden, ctx), 4096, 64, ctx.tol);
    CHECK(super.tag == Classification::Tag::SuperstableCycle);
    CHECK(super.period == 2);

    Classification cheb = classify(QuadraticMap(2.0, ctx), 4096, 64, ctx.tol);
    CHECK(cheb.tag == Classification::Tag::NonrecurrentCritical);

    Classification parab = classify(QuadraticMap(1.5, ctx), 4096, 64, ctx.tol);
    CHECK(parab.tag == Classification::Tag::Undetermined);
}

TEST_CASE("classification stable under budget doubling") {
    auto ctx = ctx256();
    for (double a : {0.75, 2.0}) {
        Classification c1 = classify(QuadraticMap(a, ctx), 2048, 32, ctx.tol);
        Classification c2 = classify(QuadraticMap(a, ctx), 4096, 64, ctx.tol);
        CHECK(c1.tag == c2.tag);
        CHECK(c1.period == c2.period);
    }
}
