#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nestlab/orbitstats.hpp"

using namespace nestlab;

namespace {
PrecisionContext ctx256() { return PrecisionContext::make(256, "1e-40"); }
}

TEST_CASE("ce series at a=2 is constant ln 4") {
    QuadraticMap m(2.0, ctx256());
    CEReport rep = ce_exponent(m, 100);
    REQUIRE(rep.series.size() == 100);
    double ln4 = std::log(4.0);
    for (double v : rep.series) CHECK(std::abs(v - ln4) < 1e-12);
    CHECK(std::abs(rep.liminf_proxy - ln4) < 1e-12);
    CHECK(!rep.critical_hit);
}

TEST_CASE("ce at the sink parameter a=0.75 settles at ln(1/2)") {
    QuadraticMap m(0.75, ctx256());
    CEReport rep = ce_exponent(m, 200);
    CHECK(rep.liminf_proxy < 0.0);
    CHECK(rep.liminf_proxy == doctest::Approx(std::log(0.5)).epsilon(0.05));
}

TEST_CASE("ce critical hit at the superstable period-2 parameter") {
    auto ctx = ctx256();
    Real golden = (sqrt(ctx.real(5.0)) + 1.0) * 0.5;
    QuadraticMap m(golden, ctx);
    CEReport rep = ce_exponent(m, 10);
    REQUIRE(rep.critical_hit.has_value());
    CHECK(*rep.critical_hit == 2);
    RecurrenceReport rr = recurrence_exponent(m, 10, 0.1);
    REQUIRE(rr.critical_hit.has_value());
    CHECK(*rr.critical_hit == 2);
}

TEST_CASE("recurrence proxies at stationary orbits") {
    QuadraticMap m2(2.0, ctx256());
    RecurrenceReport r2 = recurrence_exponent(m2, 100, 0.1);
    CHECK(r2.exponent_proxy == 0.0);
    for (double margin : r2.subexp_margins) CHECK(margin >= 1.0); // |f^n(0)| = 1

    QuadraticMap ms(0.75, ctx256());
    RecurrenceReport rs = recurrence_exponent(ms, 200, 0.1);
    CHECK(rs.exponent_proxy == 0.0); // distance to 0 bounded below: no deep records
}

TEST_CASE("recurrence proxy invariant under doubling n_max at stationary parameters") {
    for (double a : {2.0, 0.75}) {
        QuadraticMap m(a, ctx256());
        double p1 = recurrence_exponent(m, 100, 0.1).exponent_proxy;
        double p2 = recurrence_exponent(m, 200, 0.1).exponent_proxy;
        CHECK(p1 == doctest::Approx(p2).epsilon(1e-12));
    }
}

TEST_CASE("birkhoff averages") {
    auto ctx = ctx256();
    QuadraticMap m2(2.0, ctx);
    double avg = birkhoff_average(m2, 0.3, BirkhoffSpec{Observable::identity}, 1000000);
    CHECK(std::abs(avg) < 0.01); // arcsine density is symmetric

    BirkhoffSpec full;
    full.kind = Observable::indicator;
    full.ind_lo = -1.0;
    full.ind_hi = 1.0;
    CHECK(birkhoff_average(m2, 0.3, full, 10000) == doctest::Approx(1.0));

    QuadraticMap ms(0.75, ctx);
    double sink = birkhoff_average(ms, 0.2, BirkhoffSpec{Observable::identity}, 10000);
    CHECK(std::abs(sink - (-1.0 / 3.0)) < 1e-3);
}

TEST_CASE("autocorrelation at a=2 is flat, lag 0 is 1, sink degenerates") {
    auto ctx = ctx256();
    QuadraticMap m2(2.0, ctx);
    AutocorrResult ac = autocorrelation(m2, 0.3123, {0, 1, 2, 3, 4, 5}, 1000000);
    CHECK(!ac.degenerate_variance);
    for (auto [lag, rho] : ac.rho) {
        if (lag == 0)
            CHECK(rho == doctest::Approx(1.0));
        else
            CHECK(std::abs(rho) < 0.01);
    }
    QuadraticMap ms(0.75, ctx);
    AutocorrResult acs = autocorrelation(ms, 0.2, {1}, 10000);
    CHECK(acs.degenerate_variance);
}

TEST_CASE("acim histogram matches the arcsine density at a=2") {
    auto ctx = ctx256();
    QuadraticMap m2(2.0, ctx);
    const int bins = 100;
    Histogram h = acim_histogram(m2, 0.3123, bins, 10000000);
    double w = h.width();
    // normalization
    double total = 0.0;
    for (double d : h.density) total += d * w;
    CHECK(std::abs(total - 1.0) < 1e-12);
    // interior bins within 5% of 1/(pi sqrt(1-x^2))
    for (int b = 1; b + 1 < bins; ++b) {
        double x = -1.0 + (static_cast<double>(b) + 0.5) * w;
        double expect = 1.0 / (M_PI * std::sqrt(1.0 - x * x));
        CHECK(std::abs(h.density[static_cast<size_t>(b)] / expect - 1.0) < 0.05);
    }
}

TEST_CASE("histogram concentrates at the sink and flags empty orbits") {
    auto ctx = ctx256();
    QuadraticMap ms(0.75, ctx);
    Histogram h = acim_histogram(ms, 0.2, 50, 100000);
    // sink at -1/3: bin index floor((x+1)/w)
    int sink_bin = static_cast<int>((-1.0 / 3.0 + 1.0) / h.width());
    double mass = h.density[static_cast<size_t>(sink_bin)] * h.width();
    CHECK(mass > 0.95);

    Histogram empty = acim_histogram(ms, 0.2, 10, 0);
    CHECK(empty.empty_orbit);
    for (double d : empty.density) CHECK(d == 0.0);
}
