// Itineraries over {L, C, R} and the Milnor-Thurston (parity-lexicographic)
// order, plus parameter bisection on monotone combinatorial predicates.
#pragma once

#include <functional>

#include "nestlab/quadratic.hpp"

namespace nestlab {

struct KneadingWord {
    std::string symbols; // 'L', 'C', 'R'; C only as final symbol
    bool terminal = false;

    size_t size() const { return symbols.size(); }
};

// Symbols of f^k(x), k = 0..n-1; C (exact critical hit at tolerance 10*tol)
// terminates the word.
KneadingWord itinerary(const QuadraticMap& map, const Real& x, int n);

// Itinerary of the critical value f(0).
KneadingWord kneading(const QuadraticMap& map, int n);

// Parity-lexicographic comparison: at the first difference order by
// L < C < R, reversed when the number of preceding R's is odd. Words that
// agree on the common prefix with one side exhausted compare equal (the
// shorter word carries no further information).
int mt_compare(const KneadingWord& w1, const KneadingWord& w2);

// Bisection on the parameter for a predicate that is monotone across the
// bracket (true on one side, false on the other). The probe grid guards
// monotonicity; NotMonotoneObserved on violations, NoSignChange if the
// predicate is constant on the bracket.
Real find_parameter_by_combinatorics(const std::function<bool(const QuadraticMap&)>& predicate,
                                     const RealInterval& bracket, const Real& tol,
                                     const PrecisionContext& ctx, int probes = 9);

} // namespace nestlab
