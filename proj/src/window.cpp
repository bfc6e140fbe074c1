#include "nestlab/window.hpp"

#include <algorithm>

namespace nestlab {

namespace {

NestBudgets targeted(NestBudgets b) {
    b.sweep = false;
    return b;
}

} // namespace

WindowProbe window_probe(const QuadraticMap& map, int kappa, int i, const NestBudgets& budgets) {
    WindowProbe probe;
    Real graze = map.tol() * 10.0;

    RealInterval I_i;
    try {
        if (i == 0) {
            I_i = orientation_reversing_fixed_point(map, kappa).interval;
        } else {
            NestResult nest = build_nest(map, kappa, i, 0.5, targeted(budgets));
            if (static_cast<int>(nest.levels.size()) < i) return probe;
            for (const NestLevel& lvl : nest.levels) {
                probe.sig.kinds.push_back(lvl.kind == LevelKind::Return ? 0 : 1);
                probe.sig.v.push_back(lvl.v);
                probe.sig.s.push_back(lvl.s);
            }
            I_i = nest.levels.back().central;
        }
    } catch (const NotInDelta&) {
        return probe;
    }
    probe.I_i = I_i;

    // first return of the critical point to I_i, itinerary recorded
    Real b = I_i.hi;
    Real y(0.0, map.bits());
    long budget = budgets.max_return_time;
    for (long k = 1; k <= budget; ++k) {
        y = map.eval(y);
        Real d = abs(y);
        if (d <= graze) return probe; // critical hit: unstable at this precision
        if (d < b - graze) {
            probe.sig.v_i = k;
            probe.sig.inside = true;
            probe.crit_return = y;
            probe.sig.ok = true;
            return probe;
        }
        if (d <= b + graze) return probe; // boundary graze
        probe.sig.signs.push_back(static_cast<signed char>(y.sign()));
    }
    return probe;
}

StructuralSignature structural_signature(const QuadraticMap& map, int kappa, int i,
                                         const NestBudgets& budgets) {
    return window_probe(map, kappa, i, budgets).sig;
}

namespace {

// Membership data for Jj / Jd: the sign chain of the branch word and the
// level of the pullback target (always I_i here).
struct MemberTest {
    std::vector<signed char> signs;
    bool active = false;
};

bool window_predicate(const QuadraticMap& g, int kappa, int i, const StructuralSignature& want,
                      const MemberTest& member, const NestBudgets& budgets) {
    WindowProbe probe = window_probe(g, kappa, i, budgets);
    if (!(probe.sig == want)) return false;
    if (!member.active) return true;
    auto K = chain_pullback(g, member.signs, probe.I_i);
    if (!K) return false;
    return K->contains(probe.crit_return);
}

} // namespace

ParameterWindow window(const QuadraticMap& anchor, int kappa, int i, WindowKind kind,
                       const Real& tol, int j, const std::vector<int>& word) {
    const PrecisionContext& ctx = anchor.ctx();
    StructuralSignature want = structural_signature(anchor, kappa, i);
    if (!want.ok) throw CombinatoricsUnstable("anchor structure unresolved at level " +
                                              std::to_string(i));

    MemberTest member;
    if (kind != WindowKind::J) {
        NestResult nest = build_nest(anchor, kappa, i + 1, 0.9);
        if (static_cast<int>(nest.levels.size()) < i + 1)
            throw CombinatoricsUnstable("anchor nest too shallow for branch window");
        const NestLevel& lvl = nest.levels[static_cast<size_t>(i)];
        std::vector<int> idx;
        if (kind == WindowKind::Jj)
            idx.push_back(j);
        else
            idx = word;
        if (idx.empty()) throw DomainError("branch window needs a branch index or word");
        for (int jj : idx) {
            const Branch* br = lvl.branch_by_index(jj);
            if (!br) throw WordNotFound("level has no branch with index " + std::to_string(jj));
            auto sg = orbit_signs(anchor, br->mid(), br->return_time);
            if (sg.empty()) throw CombinatoricsUnstable("branch orbit hits the critical point");
            member.signs.insert(member.signs.end(), sg.begin(), sg.end());
        }
        member.active = true;
        // the anchor itself must satisfy the membership it defines
        if (!window_predicate(anchor, kappa, i, want, member, NestBudgets{}))
            throw CombinatoricsUnstable("anchor not inside the requested branch window");
    }

    auto pred_at = [&](const Real& a) {
        if (a < 0.5 || a > 2.0) return false;
        return window_predicate(QuadraticMap(a, ctx), kappa, i, want, member, NestBudgets{});
    };

    const Real& a0 = anchor.a();
    auto grow = [&](int dir) -> std::pair<Real, Real> { // (inside, outside)
        Real h = tol * 8.0;
        Real in_pt = a0;
        for (int it = 0; it < 200; ++it) {
            Real cand = a0 + h * static_cast<double>(dir);
            if (cand < 0.5 || cand > 2.0 || !pred_at(cand)) {
                Real lo = in_pt, hi = cand;
                while (abs(hi - lo) > tol) {
                    Real mid = (lo + hi) * 0.5;
                    if (pred_at(mid))
                        lo = mid;
                    else
                        hi = mid;
                }
                return {lo, hi};
            }
            in_pt = cand;
            h *= 2.0;
        }
        throw CombinatoricsUnstable("window growth did not terminate");
    };

    auto [hi_in, hi_out] = grow(+1);
    auto [lo_in, lo_out] = grow(-1);

    ParameterWindow w;
    w.level = i;
    w.kind = kind;
    w.j = j;
    w.word = word;
    w.anchor = a0;
    w.interval = RealInterval(lo_in, hi_in);
    w.lo_in = lo_in;
    w.lo_out = lo_out;
    w.hi_in = hi_in;
    w.hi_out = hi_out;
    if (abs(hi_in - a0) <= tol * 2.0 || abs(a0 - lo_in) <= tol * 2.0)
        throw CombinatoricsUnstable("anchor within tol of a window boundary");
    return w;
}

namespace {

struct EndpointData {
    Real x;                          // phase endpoint of the anchor
    std::vector<signed char> signs;  // branch word signs
    long r = 0;
    int side = 0;                    // sign of f^r(x): which end of I_i it hits
};

Real continuation(const QuadraticMap& g, const EndpointData& ep, const RealInterval& I_i_g) {
    auto K = chain_pullback(g, ep.signs, I_i_g);
    if (!K) throw CombinatoricsMismatch("branch continuation lost");
    Real im_lo = g.iterate(K->lo, ep.r);
    return (im_lo.sign() == ep.side) ? K->lo : K->hi;
}

} // namespace

XiSample xi_sample(const QuadraticMap& anchor, int kappa, int i,
                   const std::vector<PhaseEndpoint>& endpoints, const Real& tol) {
    const PrecisionContext& ctx = anchor.ctx();
    StructuralSignature want = structural_signature(anchor, kappa, i);
    if (!want.ok) throw CombinatoricsUnstable("anchor structure unresolved");

    NestResult nest = build_nest(anchor, kappa, i + 1, 0.9);
    if (static_cast<int>(nest.levels.size()) < i + 1)
        throw CombinatoricsUnstable("anchor nest too shallow");
    const NestLevel& lvl = nest.levels[static_cast<size_t>(i)];

    std::vector<EndpointData> eps;
    for (const PhaseEndpoint& pe : endpoints) {
        const Branch* br = lvl.branch_by_index(pe.branch_index);
        if (!br) throw WordNotFound("no branch with index " + std::to_string(pe.branch_index));
        EndpointData ed;
        ed.x = pe.upper ? br->domain.hi : br->domain.lo;
        ed.signs = orbit_signs(anchor, br->mid(), br->return_time);
        if (ed.signs.empty()) throw CombinatoricsUnstable("branch orbit hits the critical point");
        ed.r = br->return_time;
        ed.side = anchor.iterate(ed.x, ed.r).sign();
        eps.push_back(std::move(ed));
    }

    ParameterWindow J = window(anchor, kappa, i, WindowKind::J, tol);

    XiSample out;
    for (const EndpointData& ed : eps) {
        auto phi_sign = [&](const Real& a) -> int {
            QuadraticMap g(a, ctx);
            WindowProbe probe = window_probe(g, kappa, i);
            if (!probe.sig.ok) throw CombinatoricsMismatch("probe left the window");
            Real x_g = continuation(g, ed, probe.I_i);
            Real d = probe.crit_return - x_g;
            return d.sign();
        };
        // monotonicity guard on a coarse grid
        {
            int flips = 0;
            int prev = 0;
            for (int k = 0; k <= 4; ++k) {
                Real t(static_cast<double>(k) / 4.0, ctx.bits);
                Real a = J.lo_in + (J.hi_in - J.lo_in) * t;
                int sgn = phi_sign(a);
                if (prev != 0 && sgn != 0 && sgn != prev) ++flips;
                if (sgn != 0) prev = sgn;
            }
            if (flips > 1) throw NotMonotoneObserved("critical value crosses endpoint twice");
        }
        Real lo = J.lo_in, hi = J.hi_in;
        int slo = phi_sign(lo), shi = phi_sign(hi);
        if (slo == shi) throw NotMonotoneObserved("no crossing for endpoint " + ed.x.str(20));
        while (hi - lo > tol) {
            Real mid = (lo + hi) * 0.5;
            int sm = phi_sign(mid);
            if (sm == 0) {
                lo = mid;
                hi = mid;
                break;
            }
            if (sm == slo)
                lo = mid;
            else
                hi = mid;
        }
        out.pairs.emplace_back(ed.x, (lo + hi) * 0.5);
    }
    std::sort(out.pairs.begin(), out.pairs.end(),
              [](const auto& p, const auto& q) { return p.first < q.first; });
    // strict monotonicity in the parameter coordinate (either direction)
    if (out.pairs.size() >= 2) {
        bool incr = true, decr = true;
        for (size_t k = 0; k + 1 < out.pairs.size(); ++k) {
            if (!(out.pairs[k + 1].second > out.pairs[k].second)) incr = false;
            if (!(out.pairs[k + 1].second < out.pairs[k].second)) decr = false;
        }
        if (!incr && !decr) throw NotMonotoneObserved("xi sample not monotone");
    }
    return out;
}

XiSample xi_sample(const QuadraticMap& anchor, int kappa, int i, int count, const Real& tol) {
    NestResult nest = build_nest(anchor, kappa, i + 1, 0.9);
    if (static_cast<int>(nest.levels.size()) < i + 1)
        throw CombinatoricsUnstable("anchor nest too shallow");
    const NestLevel& lvl = nest.levels[static_cast<size_t>(i)];
    std::vector<PhaseEndpoint> eps;
    for (int rank = 1; static_cast<int>(eps.size()) + 1 < count + 1; ++rank) {
        bool any = false;
        for (int sgn : {+1, -1}) {
            if (lvl.branch_by_index(sgn * rank)) {
                any = true;
                if (static_cast<int>(eps.size()) < count)
                    eps.push_back({sgn * rank, false});
                if (static_cast<int>(eps.size()) < count)
                    eps.push_back({sgn * rank, true});
            }
        }
        if (!any) break;
    }
    if (static_cast<int>(eps.size()) < count)
        throw WordNotFound("not enough resolved branches for requested endpoints");
    return xi_sample(anchor, kappa, i, eps, tol);
}

HolonomyPairs holonomy_sample(const QuadraticMap& f, const QuadraticMap& g, int kappa, int i,
                              const Real& tol) {
    StructuralSignature sf = structural_signature(f, kappa, i);
    if (!sf.ok) throw CombinatoricsUnstable("anchor structure unresolved");
    WindowProbe pg = window_probe(g, kappa, i);
    if (!(pg.sig == sf)) throw CombinatoricsMismatch("maps do not share level-" +
                                                     std::to_string(i) + " combinatorics");
    (void)tol;

    NestResult nest = build_nest(f, kappa, i + 1, 0.9);
    if (static_cast<int>(nest.levels.size()) < i + 1)
        throw CombinatoricsUnstable("anchor nest too shallow");
    const NestLevel& lvl = nest.levels[static_cast<size_t>(i)];

    HolonomyPairs out;
    for (const Branch& br : lvl.branches) {
        auto signs = orbit_signs(f, br.mid(), br.return_time);
        if (signs.empty()) continue;
        for (bool upper : {false, true}) {
            EndpointData ed;
            ed.x = upper ? br.domain.hi : br.domain.lo;
            ed.signs = signs;
            ed.r = br.return_time;
            ed.side = f.iterate(ed.x, ed.r).sign();
            Real y = continuation(g, ed, pg.I_i);
            out.pairs.emplace_back(ed.x, y);
        }
    }
    std::sort(out.pairs.begin(), out.pairs.end(),
              [](const auto& p, const auto& q) { return p.first < q.first; });
    return out;
}

} // namespace nestlab
