#include "nestlab/capacity.hpp"

#include <algorithm>
#include <cmath>

namespace nestlab {

MonotonePairs MonotonePairs::normalized(const std::vector<std::pair<Real, Real>>& pairs) {
    MonotonePairs out;
    if (pairs.size() < 3) throw NotMonotone("need at least 3 pairs");
    const Real& x0 = pairs.front().first;
    const Real& y0 = pairs.front().second;
    Real xs = pairs.back().first - x0;
    Real ys = pairs.back().second - y0;
    if (!(xs > 0.0) || ys.is_zero()) throw NotMonotone("degenerate pair range");
    // dividing by ys flips a decreasing correspondence to increasing
    for (const auto& [x, y] : pairs) {
        double u = ((x - x0) / xs).to_double();
        double v = ((y - y0) / ys).to_double();
        out.pts.emplace_back(u, v);
    }
    for (size_t i = 0; i + 1 < out.pts.size(); ++i)
        if (!(out.pts[i + 1].first > out.pts[i].first) ||
            !(out.pts[i + 1].second > out.pts[i].second))
            throw NotMonotone("pairs not strictly monotone");
    return out;
}

namespace {

double qs_sup_on_grid(const std::function<double(double)>& F, int depth) {
    int n = 1 << depth;
    std::vector<double> vals(static_cast<size_t>(n) + 1);
    for (int j = 0; j <= n; ++j)
        vals[static_cast<size_t>(j)] = F(static_cast<double>(j) / static_cast<double>(n));
    double k = 1.0;
    for (int j = 1; j < n; ++j) {
        int mmax = std::min(j, n - j);
        for (int m = 1; m <= mmax; ++m) {
            double up = vals[static_cast<size_t>(j + m)] - vals[static_cast<size_t>(j)];
            double dn = vals[static_cast<size_t>(j)] - vals[static_cast<size_t>(j - m)];
            if (dn <= 0.0 || up <= 0.0) return 1e300;
            double r = up / dn;
            k = std::max(k, std::max(r, 1.0 / r));
        }
    }
    return k;
}

} // namespace

double qs_constant_fn(const std::function<double(double)>& h, int grid_depth) {
    return qs_sup_on_grid(h, grid_depth);
}

double qs_constant(const MonotonePairs& pairs, int grid_depth) {
    if (pairs.pts.size() < 3) throw NotMonotone("need at least 3 pairs");
    const auto& pts = pairs.pts;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        if (!(pts[i + 1].first > pts[i].first) || !(pts[i + 1].second > pts[i].second))
            throw NotMonotone("pairs not strictly monotone");
    auto F = [&](double x) -> double {
        if (x <= pts.front().first) return pts.front().second;
        if (x >= pts.back().first) return pts.back().second;
        size_t lo = 0, hi = pts.size() - 1;
        while (hi - lo > 1) {
            size_t mid = (lo + hi) / 2;
            if (pts[mid].first <= x)
                lo = mid;
            else
                hi = mid;
        }
        double t = (x - pts[lo].first) / (pts[hi].first - pts[lo].first);
        return pts[lo].second + t * (pts[hi].second - pts[lo].second);
    };
    return qs_sup_on_grid(F, grid_depth);
}

namespace {

// candidate: b segments on the uniform partition, interior images u[1..b-1],
// per-segment exponents e[0..b-1]
struct Candidate {
    int b = 1;
    std::vector<double> u; // size b+1, u[0]=0, u[b]=1
    std::vector<double> e; // size b

    double eval(double x) const {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        double seg = x * b;
        int i = std::min(static_cast<int>(seg), b - 1);
        double t = seg - i;
        return u[static_cast<size_t>(i)] +
               (u[static_cast<size_t>(i + 1)] - u[static_cast<size_t>(i)]) *
                   std::pow(t, e[static_cast<size_t>(i)]);
    }
};

double measure_of_image(const Candidate& c, const std::vector<std::pair<double, double>>& X) {
    double acc = 0.0;
    for (const auto& [lo, hi] : X) acc += c.eval(hi) - c.eval(lo);
    return acc;
}

std::vector<double> exponent_lattice(const PowerFamily& fam) {
    std::vector<double> e{1.0};
    double v = 1.0;
    while (v * fam.exponent_ratio <= fam.max_exponent + 1e-12) {
        v *= fam.exponent_ratio;
        e.push_back(v);
        e.push_back(1.0 / v);
    }
    std::sort(e.begin(), e.end());
    return e;
}

} // namespace

CapacityEstimate capacity_lower_bound_unit(const std::vector<std::pair<double, double>>& X,
                                           double k, const PowerFamily& fam) {
    if (k < 1.0) throw DomainError("qs constant k must be >= 1");
    for (const auto& [lo, hi] : X)
        if (lo < -1e-12 || hi > 1.0 + 1e-12 || hi < lo)
            throw DomainError("X must consist of ordered subintervals of T");

    CapacityEstimate best;
    best.k = k;
    best.family = "piecewise-power(p=" + std::to_string(fam.max_exponent) +
                  ",B=" + std::to_string(fam.breakpoints) + ")";
    Candidate ident;
    ident.b = 1;
    ident.u = {0.0, 1.0};
    ident.e = {1.0};
    best.value = measure_of_image(ident, X); // identity is always admissible

    auto elat = exponent_lattice(fam);
    auto admissible = [&](const Candidate& c) {
        double kc = qs_constant_fn([&](double x) { return c.eval(x); }, fam.qs_check_depth);
        if (kc <= k + 1e-9) return true;
        if (fam.strict)
            throw FamilyViolatesK("candidate qs constant " + std::to_string(kc) +
                                  " exceeds k = " + std::to_string(k));
        return false;
    };

    for (int b = 1; b <= fam.breakpoints + 1; ++b) {
        Candidate c;
        c.b = b;
        c.u.assign(static_cast<size_t>(b) + 1, 0.0);
        for (int i = 0; i <= b; ++i)
            c.u[static_cast<size_t>(i)] = static_cast<double>(i) / static_cast<double>(b);
        c.e.assign(static_cast<size_t>(b), 1.0);
        double cur = measure_of_image(c, X);

        for (int sweep = 0; sweep < 6; ++sweep) {
            bool improved = false;
            // exponents
            for (int i = 0; i < b; ++i) {
                double keep = c.e[static_cast<size_t>(i)];
                double bestv = cur;
                double beste = keep;
                for (double e : elat) {
                    c.e[static_cast<size_t>(i)] = e;
                    double v = measure_of_image(c, X);
                    if (v > bestv + 1e-15 && admissible(c)) {
                        bestv = v;
                        beste = e;
                    }
                }
                c.e[static_cast<size_t>(i)] = beste;
                if (bestv > cur) {
                    cur = bestv;
                    improved = true;
                }
            }
            // interior image points
            for (int i = 1; i < b; ++i) {
                double keep = c.u[static_cast<size_t>(i)];
                double lo = c.u[static_cast<size_t>(i - 1)], hi = c.u[static_cast<size_t>(i + 1)];
                double bestv = cur;
                double bestu = keep;
                for (int sstep = 1; sstep <= fam.image_steps; ++sstep) {
                    double u = lo + (hi - lo) * static_cast<double>(sstep) /
                                        static_cast<double>(fam.image_steps + 1);
                    c.u[static_cast<size_t>(i)] = u;
                    double v = measure_of_image(c, X);
                    if (v > bestv + 1e-15 && admissible(c)) {
                        bestv = v;
                        bestu = u;
                    }
                }
                c.u[static_cast<size_t>(i)] = bestu;
                if (bestv > cur) {
                    cur = bestv;
                    improved = true;
                }
            }
            if (!improved) break;
        }
        if (cur > best.value) best.value = cur;
    }
    return best;
}

CapacityEstimate capacity_lower_bound(const std::vector<RealInterval>& X, const RealInterval& T,
                                      double k, const PowerFamily& fam) {
    Real len = T.length();
    if (!(len > 0.0)) throw DomainError("degenerate reference interval");
    std::vector<std::pair<double, double>> nx;
    for (const RealInterval& xi : X) {
        if (xi.lo < T.lo - T.length() * 1e-12 || xi.hi > T.hi + T.length() * 1e-12)
            throw DomainError("X not contained in T");
        nx.emplace_back(((xi.lo - T.lo) / len).to_double(), ((xi.hi - T.lo) / len).to_double());
    }
    std::sort(nx.begin(), nx.end());
    for (auto& p : nx) {
        p.first = std::clamp(p.first, 0.0, 1.0);
        p.second = std::clamp(p.second, 0.0, 1.0);
    }
    return capacity_lower_bound_unit(nx, k, fam);
}

TreeCheck tree_subadditivity_check(const std::vector<RealInterval>& children,
                                   const RealInterval& T, const std::vector<RealInterval>& X,
                                   double k, const PowerFamily& fam) {
    TreeCheck res;
    res.lhs = capacity_lower_bound(X, T, k, fam).value;
    res.cover = capacity_lower_bound(children, T, k, fam).value;
    double sup = 0.0;
    for (const RealInterval& ch : children) {
        std::vector<RealInterval> xin;
        for (const RealInterval& xi : X)
            if (xi.lo >= ch.lo && xi.hi <= ch.hi) xin.push_back(xi);
        if (xin.empty()) continue;
        sup = std::max(sup, capacity_lower_bound(xin, ch, k, fam).value);
    }
    res.sup_child = sup;
    res.slack = res.cover * res.sup_child - res.lhs;
    res.holds = res.slack >= -1e-9;
    res.family_artifact = !res.holds;
    return res;
}

} // namespace nestlab
