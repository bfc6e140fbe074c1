#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nestlab/exclusion.hpp"
#include "nestlab/quadratic.hpp"

using namespace nestlab;

namespace {
PrecisionContext ctx256() { return PrecisionContext::make(256, "1e-40"); }
}

TEST_CASE("evaluation and boundary behavior") {
    auto ctx = ctx256();
    QuadraticMap m2(2.0, ctx);
    CHECK(m2.eval(ctx.real(0.0)).to_double() == doctest::Approx(1.0));
    CHECK(m2.eval(ctx.real(1.0)).to_double() == doctest::Approx(-1.0));
    QuadraticMap m075(0.75, ctx);
    CHECK(m075.eval(ctx.real(0.0)).to_double() == doctest::Approx(-0.25));
    CHECK_THROWS_AS(m2.eval(ctx.real(1.5)), DomainError);
    CHECK_THROWS_AS(QuadraticMap(2.5, ctx), DomainError);
    CHECK_THROWS_AS(QuadraticMap(0.4, ctx), DomainError);
}

TEST_CASE("derivative products") {
    auto ctx = ctx256();
    QuadraticMap m(2.0, ctx);
    CHECK(m.deriv_product(ctx.real(1.0), 1).to_double() == doctest::Approx(4.0));
    CHECK(m.deriv_product(ctx.real(1.0), 3).to_double() == doctest::Approx(64.0));
    // orbit through the critical point kills the product
    CHECK(m.deriv_product(ctx.real(0.0), 2).is_zero());
}

TEST_CASE("chain rule for derivative products") {
    auto ctx = ctx256();
    QuadraticMap m(1.83, ctx);
    Real x = ctx.real(0.3123);
    for (auto [mm, nn] : {std::pair<long, long>{3, 4}, {5, 7}, {1, 11}}) {
        Real lhs = m.deriv_product(x, mm + nn);
        Real rhs = m.deriv_product(x, mm) * m.deriv_product(m.iterate(x, mm), nn);
        CHECK(abs(lhs - rhs) <= abs(lhs) * ctx.real("1e-15"));
    }
}

TEST_CASE("conjugate parameter closed forms") {
    auto ctx = ctx256();
    CHECK(conjugate_parameter(ctx.real(2.0)).to_double() == doctest::Approx(2.0));
    CHECK(conjugate_parameter(ctx.real(1.5)).to_double() == doctest::Approx(0.75));
    CHECK(conjugate_parameter(ctx.real(1.0)).to_double() == doctest::Approx(0.0));
    CHECK(conjugate_parameter_inverse(ctx.real(0.75)).to_double() == doctest::Approx(1.5));
}

TEST_CASE("conjugacy to x -> atil - x^2 on random orbits") {
    auto ctx = ctx256();
    Real tol("1e-20", 256);
    for (int trial = 0; trial < 100; ++trial) {
        double ad = 0.5 + 1.5 * counter_uniform(42, 1, static_cast<uint64_t>(trial));
        double xd = -1.0 + 2.0 * counter_uniform(42, 2, static_cast<uint64_t>(trial));
        long n = 1 + static_cast<long>(19 * counter_uniform(42, 3, static_cast<uint64_t>(trial)));
        QuadraticMap m(ad, ctx);
        Real atil = conjugate_parameter(m.a());
        // y_{k+1} = atil - y_k^2 started at y_0 = a x should track a f^k(x)
        Real y = m.a() * ctx.real(xd);
        Real x = ctx.real(xd);
        for (long k = 0; k < n; ++k) {
            x = m.eval(x);
            y = atil - y * y;
        }
        CHECK(abs(m.a() * x - y) < tol);
    }
}

TEST_CASE("orbit records points and derivative magnitudes") {
    auto ctx = ctx256();
    QuadraticMap m(1.7, ctx);
    Orbit o = m.orbit(ctx.real(0.2), 8);
    REQUIRE(o.points.size() == 9);
    for (size_t k = 0; k + 1 < o.points.size(); ++k)
        CHECK(abs(o.points[k + 1] - m.eval(o.points[k])).to_double() < 1e-70);
    for (size_t k = 0; k < o.points.size(); ++k)
        CHECK(abs(o.derivs[k] - 2.0 * (m.a() * abs(o.points[k]))).to_double() < 1e-70);
}
