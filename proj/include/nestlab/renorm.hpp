// Periodic orbits, renormalization intervals and map classification.
#pragma once

#include <optional>
#include <vector>

#include "nestlab/quadratic.hpp"

namespace nestlab {

struct PeriodicOrbit {
    int period = 0;           // minimal period
    std::vector<Real> points; // one point per cycle element, orbit order
    Real multiplier;          // signed Df^period at a cycle point
};

// All cycles whose period divides m, located by splitting [-1,1] at the
// critical preimages (so each lap of f^m is monotone) and bisecting.
std::vector<PeriodicOrbit> periodic_points(const QuadraticMap& map, int m, const Real& tol,
                                           long lap_budget = 1 << 13);

struct RenormalizationRecord {
    int period = 0;
    RealInterval T;    // maximal restrictive interval, symmetric [-q, q]
    RealInterval hatT; // [f^{2m}(0), f^m(0)] ordered
};

// Restrictive intervals of period 2..m_max with verified containment and
// interior disjointness (exact interval images, no sampling).
std::vector<RenormalizationRecord> detect_renormalizations(const QuadraticMap& map, int m_max,
                                                           const Real& tol,
                                                           long lap_budget = 1 << 13);

struct OrientationReversingPoint {
    Real p;                // |fixed point| of f^{m_k} with Df^{m_k} <= -1
    RealInterval interval; // [-p, p]
    int period = 1;        // m_k
};

// k = 0 uses the base family; k > 0 works inside the k-th renormalization
// interval. Throws NotInDelta if the required point does not exist.
OrientationReversingPoint orientation_reversing_fixed_point(const QuadraticMap& map, int k);
OrientationReversingPoint orientation_reversing_fixed_point(
    const QuadraticMap& map, int k, const std::vector<RenormalizationRecord>& chain);

struct Classification {
    enum class Tag { RegularSink, SuperstableCycle, NonrecurrentCritical, RecurrentCandidate, Undetermined };
    Tag tag = Tag::Undetermined;
    int period = 0;          // sink / superstable period
    double multiplier = 0.0; // sink multiplier
    int kappa = 0;           // renormalization depth for RecurrentCandidate
    Real sink_point;         // a point of the sink cycle (RegularSink only)
    long iters_used = 0;
    int period_budget = 0;
    mpfr_prec_t bits = 0;
};

const char* to_string(Classification::Tag tag);

Classification classify(const QuadraticMap& map, long iter_budget, int period_budget,
                        const Real& tol);

} // namespace nestlab
