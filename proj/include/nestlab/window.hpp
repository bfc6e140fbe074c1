// Parameter windows realizing the topological phase-parameter
// correspondence empirically: J_i, J_i^j, sampled Xi_i and holonomies.
#pragma once

#include "nestlab/nest.hpp"
#include "nestlab/symbolic.hpp"

namespace nestlab {

// Structural fingerprint of the nest through level i: per-level kinds and
// (v_n, s_n), the critical itinerary up to the first level-i return, and
// whether that return lands strictly inside I_i. Two maps share level-i
// combinatorics iff their signatures agree.
struct StructuralSignature {
    bool ok = false;
    std::vector<int> kinds;
    std::vector<long> v, s;
    long v_i = 0;
    std::vector<signed char> signs; // sign of f^k(0), k = 1..v_i-1
    bool inside = false;

    bool operator==(const StructuralSignature&) const = default;
};

StructuralSignature structural_signature(const QuadraticMap& map, int kappa, int i,
                                         const NestBudgets& budgets = {});

// Signature plus the data needed to test branch membership for this map:
// the interval I_i and the first level-i return of the critical point.
struct WindowProbe {
    StructuralSignature sig;
    RealInterval I_i;
    Real crit_return; // f^{v_i}(0)
};
WindowProbe window_probe(const QuadraticMap& map, int kappa, int i,
                         const NestBudgets& budgets = {});

enum class WindowKind { J, Jj, Jd };

struct ParameterWindow {
    int level = 0;
    WindowKind kind = WindowKind::J;
    int j = 0;              // branch index for Jj
    std::vector<int> word;  // landing word for Jd
    RealInterval interval;  // in parameter space
    Real anchor;
    // certification brackets: predicate true at *_in, false at *_out
    Real lo_in, lo_out, hi_in, hi_out;
};

// Grows the parameter interval around the anchor by outward geometric
// probing and bisection while the defining combinatorics hold.
// Throws CombinatoricsUnstable if the anchor sits within tol of a boundary.
ParameterWindow window(const QuadraticMap& anchor, int kappa, int i, WindowKind kind,
                       const Real& tol, int j = 0, const std::vector<int>& word = {});

struct PhaseEndpoint {
    int branch_index = 0;
    bool upper = false; // which endpoint of the branch domain
};

struct XiSample {
    std::vector<std::pair<Real, Real>> pairs; // (phase point of anchor, parameter)
};

// For each requested branch endpoint x of the anchor's level-i return
// structure, locates by bisection the parameter where the critical value
// R_i[g](0) crosses the continuation of x.
XiSample xi_sample(const QuadraticMap& anchor, int kappa, int i,
                   const std::vector<PhaseEndpoint>& endpoints, const Real& tol);

// Convenience: endpoints of the innermost `count/2` branches on both sides.
XiSample xi_sample(const QuadraticMap& anchor, int kappa, int i, int count, const Real& tol);

struct HolonomyPairs {
    std::vector<std::pair<Real, Real>> pairs; // (x in K_i[f], y in K_i[g])
};

// Matches branch endpoints of equal combinatorial address across the phase
// spaces of f and g. Throws CombinatoricsMismatch if g leaves J_i[f].
HolonomyPairs holonomy_sample(const QuadraticMap& f, const QuadraticMap& g, int kappa, int i,
                              const Real& tol);

} // namespace nestlab
