#include "nestlab/numerics.hpp"

#include "nestlab/quadratic.hpp"

namespace nestlab {

PrecisionContext PrecisionContext::make(mpfr_prec_t bits, const std::string& tol_dec) {
    if (bits < Real::kMinBits) throw DomainError("precision below 53 bits");
    PrecisionContext ctx;
    ctx.bits = bits;
    ctx.tol = Real(tol_dec, bits);
    if (!(ctx.tol > 0.0)) throw DomainError("tolerance must be positive");
    return ctx;
}

PrecisionContext PrecisionContext::make(mpfr_prec_t bits, double tol_value) {
    if (bits < Real::kMinBits) throw DomainError("precision below 53 bits");
    PrecisionContext ctx;
    ctx.bits = bits;
    ctx.tol = Real(tol_value, bits);
    if (!(ctx.tol > 0.0)) throw DomainError("tolerance must be positive");
    return ctx;
}

PrecisionContext PrecisionContext::doubled() const {
    PrecisionContext next;
    next.bits = bits * 2 > kAutoRaiseCap ? kAutoRaiseCap : bits * 2;
    if (next.bits == bits) throw PrecisionExhausted("precision cap reached");
    next.tol = tol.at_precision(next.bits);
    return next;
}

RealInterval::RealInterval(Real l, Real h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) throw DomainError("interval endpoints out of order");
}

RootBracket bisect_root_bracketed(const std::function<Real(const Real&)>& g,
                                  const RealInterval& bracket, const Real& tol) {
    Real lo = bracket.lo, hi = bracket.hi;
    Real glo = g(lo), ghi = g(hi);
    if (glo.is_zero()) return {lo, RealInterval(lo, lo)};
    if (ghi.is_zero()) return {hi, RealInterval(hi, hi)};
    if (glo.sign() * ghi.sign() > 0)
        throw NoSignChange("no sign change on bracket [" + lo.str(20) + ", " + hi.str(20) + "]");
    while (hi - lo > tol) {
        Real mid = (lo + hi) * 0.5;
        if (!(mid > lo) || !(mid < hi))
            throw PrecisionExhausted("bracket no longer splittable at current precision");
        Real gm = g(mid);
        if (gm.is_zero()) {
            lo = mid;
            hi = mid;
            break;
        }
        if (gm.sign() == glo.sign())
            lo = mid;
        else
            hi = mid;
    }
    return {(lo + hi) * 0.5, RealInterval(lo, hi)};
}

Real bisect_root(const std::function<Real(const Real&)>& g, const RealInterval& bracket,
                 const Real& tol) {
    return bisect_root_bracketed(g, bracket, tol).root;
}

Real solve_monotone_value(const QuadraticMap& map, long n, const Real& value,
                          const RealInterval& bracket, const Real& tol, bool require_width) {
    Real lo = bracket.lo, hi = bracket.hi;
    auto done = [&](const Real& residual) {
        return abs(residual) <= tol && (!require_width || hi - lo <= tol);
    };
    Real glo = map.iterate(lo, n) - value;
    if (done(glo)) return lo;
    Real ghi = map.iterate(hi, n) - value;
    if (done(ghi)) return hi;
    if (glo.sign() * ghi.sign() > 0) throw NoSignChange("no crossing of the target value");
    int slo = glo.sign();

    // safeguarded Newton with an occasional forced bisection; once the
    // residual meets tol the bracket is certified by probing x +- tol/2
    Real x = (lo + hi) * 0.5;
    int iters = 24 + static_cast<int>(map.bits()) * 2;
    for (int it = 0; it < iters; ++it) {
        auto [fx, dfx] = map.iterate_with_deriv(x, n);
        Real gx = fx - value;
        if (gx.is_zero()) return x;
        if (abs(gx) <= tol) {
            if (!require_width || hi - lo <= tol) return x;
            Real xm = max(lo, x - tol * 0.5);
            Real xp = min(hi, x + tol * 0.5);
            Real gm = map.iterate(xm, n) - value;
            Real gp = map.iterate(xp, n) - value;
            if (gm.is_zero() || gp.is_zero() || gm.sign() != gp.sign()) return x;
        }
        if (gx.sign() == slo)
            lo = x;
        else
            hi = x;
        Real mid = (lo + hi) * 0.5;
        if (!(mid > lo) || !(mid < hi))
            throw PrecisionExhausted("value tolerance unreachable for iterate " +
                                     std::to_string(n));
        Real next = mid;
        if ((it & 3) != 3 && !dfx.is_zero()) {
            Real cand = x - gx / dfx;
            if (cand > lo && cand < hi) next = cand;
        }
        x = next;
    }
    throw PrecisionExhausted("endpoint solve did not converge");
}

RealInterval monotone_preimage(const QuadraticMap& map, int n, const RealInterval& target,
                               const RealInterval& domain, const Real& tol) {
    // Certificate: push the interval image forward; if it ever straddles the
    // critical point before the final step, f^n is not monotone on D.
    Real u = domain.lo, w = domain.hi;
    bool increasing = true;
    for (int k = 0; k < n; ++k) {
        if (u < 0.0 && w > 0.0)
            throw NotMonotone("image straddles the critical point at step " + std::to_string(k));
        Real fu = map.eval(u), fw = map.eval(w);
        // f is decreasing in |x|; orientation flips on the positive side
        if (fu <= fw) {
            u = fu;
            w = fw;
        } else {
            u = fw;
            w = fu;
            increasing = !increasing;
        }
    }
    RealInterval image(u, w);
    if (!(target.lo >= image.lo - tol) || !(target.hi <= image.hi + tol))
        throw TargetOutside("target not contained in f^n(D)");

    // endpoint of D' mapping to target.lo / target.hi depends on orientation
    Real tlo = max(target.lo, image.lo), thi = min(target.hi, image.hi);
    auto solve = [&](const Real& value) -> Real {
        if (value <= image.lo) return increasing ? domain.lo : domain.hi;
        if (value >= image.hi) return increasing ? domain.hi : domain.lo;
        return solve_monotone_value(map, n, value, domain, tol);
    };
    Real e1 = solve(tlo), e2 = solve(thi);
    if (e1 > e2) std::swap(e1, e2);
    return RealInterval(e1, e2);
}

} // namespace nestlab
