// Precision contexts, intervals and certified root finding.
#pragma once

#include <functional>

#include "nestlab/errors.hpp"
#include "nestlab/real.hpp"

namespace nestlab {

class QuadraticMap;

// Explicit working precision threaded through every computation.
// tol is the absolute tolerance for interval endpoints.
struct PrecisionContext {
    mpfr_prec_t bits = 256;
    Real tol;

    static PrecisionContext make(mpfr_prec_t bits, const std::string& tol_dec = "1e-40");
    static PrecisionContext make(mpfr_prec_t bits, double tol_value);

    // Doubled precision, capped. Used when a computation reports
    // PrecisionExhausted; the cap reflects the torrential scale collapse
    // of deep nest levels.
    static constexpr mpfr_prec_t kAutoRaiseCap = 16384;
    PrecisionContext doubled() const;

    Real real(double d) const { return Real(d, bits); }
    Real real(const std::string& dec) const { return Real(dec, bits); }
};

struct RealInterval {
    Real lo, hi;

    RealInterval() = default;
    RealInterval(Real l, Real h);

    Real length() const { return hi - lo; }
    Real mid() const { return (lo + hi) * 0.5; }
    bool contains(const Real& x) const { return x >= lo && x <= hi; }
    bool contains_strict(const Real& x) const { return x > lo && x < hi; }
    bool contains(const RealInterval& o) const { return o.lo >= lo && o.hi <= hi; }
    bool intersects_interior(const RealInterval& o) const { return o.hi > lo && o.lo < hi; }

    static RealInterval of(double l, double h, mpfr_prec_t bits) {
        return RealInterval(Real(l, bits), Real(h, bits));
    }
};

// Bisection root localization for a monotone (or at least single-crossing)
// function on a bracket with a sign change. Returns the midpoint of the
// final bracket of width <= tol.
// Throws NoSignChange if g(lo) and g(hi) have the same strict sign,
// PrecisionExhausted if the bracket cannot be split at the working precision.
Real bisect_root(const std::function<Real(const Real&)>& g, const RealInterval& bracket,
                 const Real& tol);

// Same, but also reports the final bracket.
struct RootBracket {
    Real root;
    RealInterval bracket;
};
RootBracket bisect_root_bracketed(const std::function<Real(const Real&)>& g,
                                  const RealInterval& bracket, const Real& tol);

// Unique preimage interval D' of `target` under f^n restricted to D, where
// f^n must be strictly monotone on D. The monotonicity certificate is checked
// by iterating the interval image of D: the image may never straddle the
// critical point before step n.
// Throws NotMonotone / TargetOutside / PrecisionExhausted.
RealInterval monotone_preimage(const QuadraticMap& map, int n, const RealInterval& target,
                               const RealInterval& domain, const Real& tol);

// Solves f^n(x) = value on a bracket where f^n is monotone, by a short
// bisection phase followed by safeguarded Newton. Stops when both the
// bracket width and the residual |f^n(x) - value| are below tol; throws
// PrecisionExhausted if the residual tolerance is unreachable (the value
// resolution floor is |Df^n| * 2^-bits).
Real solve_monotone_value(const QuadraticMap& map, long n, const Real& value,
                          const RealInterval& bracket, const Real& tol,
                          bool require_width = true);

} // namespace nestlab
