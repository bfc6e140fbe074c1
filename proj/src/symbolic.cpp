#include "nestlab/symbolic.hpp"

namespace nestlab {

KneadingWord itinerary(const QuadraticMap& map, const Real& x, int n) {
    KneadingWord w;
    Real hit = map.tol() * 10.0;
    Real y = x.at_precision(map.bits());
    for (int k = 0; k < n; ++k) {
        if (abs(y) <= hit) {
            w.symbols.push_back('C');
            w.terminal = true;
            return w;
        }
        w.symbols.push_back(y < 0.0 ? 'L' : 'R');
        y = map.eval(y);
    }
    return w;
}

KneadingWord kneading(const QuadraticMap& map, int n) {
    return itinerary(map, map.eval(Real(0.0, map.bits())), n);
}

namespace {
int symbol_rank(char c) { return c == 'L' ? 0 : (c == 'C' ? 1 : 2); }
} // namespace

int mt_compare(const KneadingWord& w1, const KneadingWord& w2) {
    size_t n = std::min(w1.size(), w2.size());
    int parity = 1; // +1: even number of R's seen
    for (size_t k = 0; k < n; ++k) {
        char c1 = w1.symbols[k], c2 = w2.symbols[k];
        if (c1 != c2) {
            int d = symbol_rank(c1) < symbol_rank(c2) ? -1 : 1;
            return parity * d;
        }
        if (c1 == 'R') parity = -parity;
    }
    return 0;
}

Real find_parameter_by_combinatorics(const std::function<bool(const QuadraticMap&)>& predicate,
                                     const RealInterval& bracket, const Real& tol,
                                     const PrecisionContext& ctx, int probes) {
    if (!(bracket.hi > bracket.lo)) throw DomainError("empty parameter bracket");
    if (probes < 2) probes = 2;

    auto eval = [&](const Real& a) { return predicate(QuadraticMap(a, ctx)); };

    std::vector<bool> vals;
    std::vector<Real> pts;
    for (int i = 0; i < probes; ++i) {
        Real t(static_cast<double>(i) / static_cast<double>(probes - 1), ctx.bits);
        Real a = bracket.lo + (bracket.hi - bracket.lo) * t;
        pts.push_back(a);
        vals.push_back(eval(a));
    }
    int flips = 0;
    for (int i = 0; i + 1 < probes; ++i)
        if (vals[static_cast<size_t>(i)] != vals[static_cast<size_t>(i + 1)]) ++flips;
    if (flips == 0) throw NoSignChange("predicate constant on the bracket");
    if (flips > 1) throw NotMonotoneObserved("predicate not monotone on the probe grid");

    size_t f = 0;
    while (vals[f] == vals[f + 1]) ++f;
    Real lo = pts[f], hi = pts[f + 1];
    bool lo_val = vals[f];
    while (hi - lo > tol) {
        Real mid = (lo + hi) * 0.5;
        if (!(mid > lo) || !(mid < hi)) throw PrecisionExhausted("parameter bracket unsplittable");
        if (eval(mid) == lo_val)
            lo = mid;
        else
            hi = mid;
    }
    return (lo + hi) * 0.5;
}

} // namespace nestlab
