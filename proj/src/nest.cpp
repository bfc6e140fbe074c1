#include "nestlab/nest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>

namespace nestlab {

namespace {

constexpr double kLog2e = 1.4426950408889634;

// Error growth guard for long orbit segments: a relative error of 2^-bits
// grows roughly like the accumulated derivative product. When the estimated
// error reaches the tolerance scale, results are no longer certifiable.
struct PrecisionMonitor {
    double bits;
    double log2_tol;
    double sum = 0.0;
    double min_sum = 0.0;
    long steps = 0;

    PrecisionMonitor(mpfr_prec_t b, const Real& tol)
        : bits(static_cast<double>(b)), log2_tol(std::log2(std::max(tol.to_double(), 1e-300))) {}

    void push(const Real& deriv_abs) {
        double d = deriv_abs.to_double();
        if (d > 0.0) sum += std::log(d) * kLog2e;
        min_sum = std::min(min_sum, sum);
        ++steps;
    }
    bool exhausted() const {
        double err_log2 = -bits + (sum - min_sum) + std::log2(static_cast<double>(steps + 2));
        return err_log2 > log2_tol - 10.0;
    }
};

struct WalkResult {
    enum class Status { Returned, Escaped, Sink, Precision, Budget };
    Status status = Status::Budget;
    long steps = 0;
    std::vector<Real> orbit; // f^k(start), k = 0..steps
    double sink_multiplier = 0.0;
    int sink_period = 0;
};

// First entry of the orbit of `start` into the open interval (-b, b),
// walking at most `budget` iterates. Checkpoints detect convergence to a
// cycle early; the multiplier then separates SinkDetected from escape.
WalkResult first_entry(const QuadraticMap& map, const Real& start, const Real& b, long budget,
                       bool periodic_checkpoints) {
    const Real& tol = map.tol();
    Real graze = tol * 10.0;
    WalkResult res;
    res.orbit.reserve(256);
    res.orbit.push_back(start);
    PrecisionMonitor mon(map.bits(), tol);
    Real y = start;
    for (long k = 1; k <= budget; ++k) {
        mon.push(abs(map.deriv(y)));
        y = map.eval(y);
        res.orbit.push_back(y);
        Real d = abs(y);
        if (d < b - graze) {
            res.status = WalkResult::Status::Returned;
            res.steps = k;
            return res;
        }
        if (d <= b + graze) {
            // orbit grazes the boundary at working precision
            res.status = WalkResult::Status::Precision;
            res.steps = k;
            return res;
        }
        if (mon.exhausted()) {
            res.status = WalkResult::Status::Precision;
            res.steps = k;
            return res;
        }
        if (periodic_checkpoints && (k & 15) == 0) {
            // quick closest-return probe on the tail
            long last = static_cast<long>(res.orbit.size()) - 1;
            Real conv = max(tol * 1000.0, Real(1e-35, map.bits()));
            for (int p = 1; p <= 64 && p < last; ++p) {
                if (abs(res.orbit[static_cast<size_t>(last)] -
                        res.orbit[static_cast<size_t>(last - p)]) < conv) {
                    Real mult(1.0, map.bits());
                    Real z = res.orbit[static_cast<size_t>(last)];
                    for (int j = 0; j < p; ++j) {
                        mult *= map.deriv(z);
                        z = map.eval(z);
                    }
                    res.steps = k;
                    if (abs(mult) < 1.0 - 1e-6) {
                        res.status = WalkResult::Status::Sink;
                        res.sink_multiplier = mult.to_double();
                        res.sink_period = p;
                    } else {
                        // trapped on a non-attracting cycle outside the interval
                        res.status = WalkResult::Status::Escaped;
                    }
                    return res;
                }
            }
        }
    }
    res.status = WalkResult::Status::Escaped;
    res.steps = budget;
    return res;
}

// Component of f^{-1}(J) on the given side of 0. J must lie below the
// critical value; order is preserved on the negative side, reversed on the
// positive side.
RealInterval pull_once(const QuadraticMap& map, const RealInterval& J, int side, bool& ok) {
    const Real& a = map.a();
    Real cv = a - 1.0;
    Real rad_hi = (cv - J.lo) / a; // larger radicand
    Real rad_lo = (cv - J.hi) / a;
    if (rad_hi < 0.0) {
        ok = false;
        return J;
    }
    if (rad_lo < 0.0) rad_lo = Real(0.0, map.bits());
    Real r_out = sqrt(rad_hi), r_in = sqrt(rad_lo);
    ok = true;
    if (side >= 0) return RealInterval(r_in, r_out);
    return RealInterval(-r_out, -r_in);
}

struct Chain {
    bool ok = false;
    bool precision = false;
    RealInterval result;
    int orientation = 1;
};

// Pull I back along the orbit segment f^k(start), k = 0..r; the component
// tracked is the one containing the orbit point at each step. Produces the
// return branch around `start` (start must not be the critical point).
Chain pull_back_branch(const QuadraticMap& map, const std::vector<Real>& orbit, long r,
                       const RealInterval& I) {
    Chain ch;
    RealInterval J = I;
    int orient = 1;
    for (long k = r - 1; k >= 0; --k) {
        const Real& y = orbit[static_cast<size_t>(k)];
        if (y.is_zero()) return ch;
        bool ok = true;
        J = pull_once(map, J, y.sign(), ok);
        if (!ok) {
            ch.precision = true;
            return ch;
        }
        if (y.sign() > 0) orient = -orient;
        Real slack = map.tol() * 100.0;
        if (y < J.lo - slack || y > J.hi + slack) {
            ch.precision = true;
            return ch;
        }
    }
    ch.ok = true;
    ch.result = J;
    ch.orientation = orient;
    return ch;
}

// Central component: pull I back along the critical orbit 0 -> f(0) -> ...
// -> f^v(0); the last step folds, giving the symmetric interval [-z, z].
struct CentralPull {
    bool ok = false;
    bool precision = false;
    Real z;
};

CentralPull pull_back_central(const QuadraticMap& map, const std::vector<Real>& orbit, long v,
                              const RealInterval& I) {
    CentralPull res;
    RealInterval J = I;
    for (long k = v - 1; k >= 1; --k) {
        const Real& y = orbit[static_cast<size_t>(k)];
        bool ok = true;
        J = pull_once(map, J, y.sign(), ok);
        if (!ok) {
            res.precision = true;
            return res;
        }
        Real slack = map.tol() * 100.0;
        if (y < J.lo - slack || y > J.hi + slack) {
            res.precision = true;
            return res;
        }
    }
    // fold: [-z, z] with f(z) = J.lo
    Real rad = (map.a() - 1.0 - J.lo) / map.a();
    if (rad < 0.0) {
        res.precision = true;
        return res;
    }
    res.z = sqrt(rad);
    res.ok = true;
    return res;
}

struct Piece {
    Real lo, hi;   // subinterval of [0, b]
    Real flo, fhi; // f^t(lo), f^t(hi)
    long t = 0;
    bool leftmost = false; // lo's image tracks the critical orbit
};

struct RawBranch {
    RealInterval domain;
    long r = 0;
    int orientation = 0;
    bool targeted = false;
};

} // namespace

const char* to_string(NestOutcome o) {
    switch (o) {
        case NestOutcome::Completed: return "Completed";
        case NestOutcome::CriticalEscape: return "CriticalEscape";
        case NestOutcome::SinkDetected: return "SinkDetected";
        case NestOutcome::PrecisionExhausted: return "PrecisionExhausted";
        case NestOutcome::CascadeBudget: return "CascadeBudget";
        case NestOutcome::BudgetExhausted: return "BudgetExhausted";
        case NestOutcome::NotRenormalizableDeeper: return "RenormalizableStop";
    }
    return "?";
}

const Branch* NestLevel::branch_by_index(int j) const {
    for (const Branch& br : branches)
        if (br.index == j) return &br;
    return nullptr;
}

const Branch* NestLevel::branch_containing(const Real& x) const {
    for (const Branch& br : branches)
        if (br.domain.contains(x)) return &br;
    return nullptr;
}

namespace {

struct LevelBuild {
    bool ok = false;
    NestOutcome fail = NestOutcome::Completed;
    NestOutcome stats_fail = NestOutcome::Completed; // s-walk trouble, level kept
    NestLevel level;
    bool trivial = false;
    RealInterval next_I;
};

void assign_positions(NestLevel& lvl, std::vector<RawBranch>& raw, const QuadraticMap& map) {
    const Real& tol = map.tol();
    Real sep = tol * 10.0;
    // mirror every branch (f^r is even in the level structure) and dedupe
    std::vector<RawBranch> all;
    for (const RawBranch& b : raw) {
        all.push_back(b);
        RawBranch m = b;
        m.domain = RealInterval(-b.domain.hi, -b.domain.lo);
        m.orientation = -b.orientation;
        all.push_back(std::move(m));
    }
    std::sort(all.begin(), all.end(),
              [](const RawBranch& x, const RawBranch& y) { return x.domain.lo < y.domain.lo; });
    std::vector<RawBranch> dedup;
    for (RawBranch& b : all) {
        if (!dedup.empty() && b.domain.lo - dedup.back().domain.lo < sep &&
            abs(b.domain.hi - dedup.back().domain.hi) < sep) {
            dedup.back().targeted = dedup.back().targeted && b.targeted;
            continue;
        }
        dedup.push_back(std::move(b));
    }
    // positions: ..., -2, -1 left of 0, 1, 2, ... right of 0 (innermost first)
    std::vector<Branch> out;
    int neg = 0;
    for (const RawBranch& b : dedup)
        if (b.domain.hi < 0.0) ++neg;
    int next_neg = -neg;
    int next_pos = 1;
    for (RawBranch& b : dedup) {
        Branch br;
        br.domain = b.domain;
        br.return_time = b.r;
        br.orientation = b.orientation;
        br.targeted = b.targeted;
        br.index = b.domain.lo > 0.0 ? next_pos++ : next_neg++;
        out.push_back(std::move(br));
    }
    lvl.branches = std::move(out);
}

LevelBuild build_level(const QuadraticMap& map, int n, const RealInterval& I,
                       double coverage_target, const NestBudgets& budgets) {
    LevelBuild out;
    const Real& tol = map.tol();
    Real b = I.hi;
    Real slack = tol * 10.0;

    if (b <= tol * 100.0) {
        out.fail = NestOutcome::PrecisionExhausted;
        return out;
    }

    // 1. first return of the critical point
    WalkResult walk = first_entry(map, Real(0.0, map.bits()), b, budgets.max_return_time, true);
    switch (walk.status) {
        case WalkResult::Status::Returned: break;
        case WalkResult::Status::Sink: out.fail = NestOutcome::SinkDetected; return out;
        case WalkResult::Status::Escaped: out.fail = NestOutcome::CriticalEscape; return out;
        case WalkResult::Status::Precision: out.fail = NestOutcome::PrecisionExhausted; return out;
        case WalkResult::Status::Budget: out.fail = NestOutcome::BudgetExhausted; return out;
    }
    long v = walk.steps;

    NestLevel lvl;
    lvl.n = n;
    lvl.I = I;
    lvl.v = v;

    // 2. central component
    CentralPull cp = pull_back_central(map, walk.orbit, v, I);
    if (!cp.ok) {
        out.fail = NestOutcome::PrecisionExhausted;
        return out;
    }
    Real z = cp.z;

    // trivial level: the whole interval returns at time v (renormalizable)
    if (z >= b - slack * 10.0) {
        lvl.kind = LevelKind::TrivialDescent;
        // orientation reversing non-attracting fixed point of f^v|I
        std::vector<Real> breaks{Real(0.0, map.bits())};
        auto g = [&](const Real& x) { return map.iterate(x, v) - x; };
        struct Cand {
            Real x;
            Real mult;
        };
        std::vector<Cand> cands;
        {
            std::vector<Real> cuts{I.lo, Real(0.0, map.bits()), I.hi};
            for (size_t i = 0; i + 1 < cuts.size(); ++i) {
                if (!(cuts[i + 1] > cuts[i])) continue;
                int subdiv = 8;
                Real stepw = (cuts[i + 1] - cuts[i]) / static_cast<double>(subdiv);
                Real x0 = cuts[i];
                Real g0 = g(x0);
                for (int s = 1; s <= subdiv; ++s) {
                    Real x1 = (s == subdiv) ? cuts[i + 1] : cuts[i] + stepw * static_cast<double>(s);
                    Real g1 = g(x1);
                    if (g0.sign() * g1.sign() < 0) {
                        Real root = bisect_root(g, RealInterval(x0, x1), tol);
                        Real mult(1.0, map.bits());
                        Real y = root;
                        for (long j = 0; j < v; ++j) {
                            mult *= map.deriv(y);
                            y = map.eval(y);
                        }
                        cands.push_back({root, mult});
                    }
                    x0 = x1;
                    g0 = g1;
                }
            }
        }
        const Cand* orrev = nullptr;
        bool attracting = false;
        for (const Cand& c : cands) {
            if (c.mult <= -1.0 + tol && (!orrev || abs(c.x) > abs(orrev->x))) orrev = &c;
            if (abs(c.mult) < 1.0 - 1e-9) attracting = true;
        }
        if (!orrev) {
            out.fail = attracting ? NestOutcome::SinkDetected : NestOutcome::NotRenormalizableDeeper;
            return out;
        }
        Real p = abs(orrev->x);
        lvl.central = RealInterval(-p, p);
        lvl.c = (p / b).to_double();
        lvl.coverage = 1.0;
        lvl.word_resolved = true;
        // s: iterates of f^v until the critical orbit lands in [-p, p]
        Real y = walk.orbit[static_cast<size_t>(v)];
        long s = 1;
        while (abs(y) > p && s < budgets.max_s) {
            y = map.iterate(y, v);
            ++s;
        }
        lvl.s = s;
        lvl.central_return = abs(walk.orbit[static_cast<size_t>(v)]) <= p;
        lvl.tau = lvl.central_return ? std::optional<int>(0) : std::nullopt;
        out.ok = true;
        out.trivial = true;
        out.level = std::move(lvl);
        out.next_I = out.level.central;
        return out;
    }

    lvl.central = RealInterval(-z, z);
    lvl.c = (z / b).to_double();

    std::vector<RawBranch> raw;

    // 3. sweep of (0, b] by forward subdivision
    if (budgets.sweep && n <= budgets.sweep_depth) {
        std::deque<Piece> active;
        Piece p0;
        p0.lo = Real(0.0, map.bits());
        p0.hi = b;
        p0.flo = map.a() - 1.0;
        p0.fhi = map.eval(b);
        p0.t = 1;
        p0.leftmost = true;
        active.push_back(std::move(p0));

        Real covered = z; // right-half measure covered (central half counts z)
        long t_round = 1;
        bool stop = false;
        while (!active.empty() && !stop) {
            std::deque<Piece> next;
            std::deque<Piece> work(std::move(active));
            active.clear();
            while (!work.empty()) {
                Piece pc = std::move(work.front());
                work.pop_front();
                if (pc.hi - pc.lo < slack) {
                    ++lvl.sweep.dropped_width;
                    continue; // sub-resolution gap
                }
                if (pc.t > budgets.max_return_time) {
                    ++lvl.sweep.dropped_time;
                    continue;
                }

                if (pc.leftmost && pc.t == v) {
                    // central split at the known pullback endpoint z
                    Piece rest = pc;
                    rest.lo = z;
                    bool increasing = pc.flo < pc.fhi;
                    rest.flo = increasing ? b : -b;
                    rest.leftmost = false;
                    work.push_back(std::move(rest));
                    continue;
                }
                Real img_lo = min(pc.flo, pc.fhi), img_hi = max(pc.flo, pc.fhi);
                bool covers = (img_lo <= -b + slack) && (img_hi >= b - slack);
                bool outside = !covers && ((img_hi <= -b + slack) || (img_lo >= b - slack));
                if (outside) {
                    Piece adv = pc;
                    adv.flo = map.eval(pc.flo);
                    adv.fhi = map.eval(pc.fhi);
                    adv.t = pc.t + 1;
                    next.push_back(std::move(adv));
                    continue;
                }
                if (covers) {
                    if (static_cast<long>(raw.size()) >= budgets.max_branches) {
                        stop = true;
                        break;
                    }
                    bool increasing = pc.flo < pc.fhi;
                    long t = pc.t;
                    // fresh endpoint values (the tracked images route the
                    // search but accumulate drift along t steps)
                    auto solve_to = [&](const Real& tval) -> Real {
                        // piece endpoints on the boundary orbit hit the target
                        // up to the accumulated solve residual
                        Real glo = map.iterate(pc.lo, t) - tval;
                        if (abs(glo) <= slack) return pc.lo;
                        Real ghi = map.iterate(pc.hi, t) - tval;
                        if (abs(ghi) <= slack) return pc.hi;
                        if (glo.sign() * ghi.sign() > 0) throw NoSignChange("branch endpoint");
                        return solve_monotone_value(map, t, tval, RealInterval(pc.lo, pc.hi), tol,
                                                    /*require_width=*/false);
                    };
                    Real e1, e2;
                    try {
                        e1 = solve_to(increasing ? -b : b);
                        e2 = solve_to(increasing ? b : -b);
                    } catch (const Error& e) {
                        ++lvl.sweep.solve_failures;
                        if (getenv("NESTLAB_TRACE"))
                            fprintf(stderr, "solve fail n=%d t=%ld piece=[%s,%s] img=[%s,%s]: %s\n",
                                    n, pc.t, pc.lo.str(25).c_str(), pc.hi.str(25).c_str(),
                                    pc.flo.str(25).c_str(), pc.fhi.str(25).c_str(), e.what());
                        continue; // drift-marginal piece, drop it
                    }
                    if (e1 > e2) std::swap(e1, e2);
                    RawBranch br;
                    br.domain = RealInterval(e1, e2);
                    br.r = pc.t;
                    br.orientation = increasing ? 1 : -1;
                    raw.push_back(br);
                    covered += br.domain.length();

                    Piece left = pc;
                    left.hi = e1;
                    left.fhi = increasing ? Real(-b) : Real(b);
                    Piece right = pc;
                    right.lo = e2;
                    right.flo = increasing ? Real(b) : Real(-b);
                    right.leftmost = false;
                    work.push_back(std::move(left));
                    work.push_back(std::move(right));
                    continue;
                }
                // marginal / partial piece that is not the tracked central:
                // cannot be classified at this precision, drop it
                ++lvl.sweep.dropped_marginal;
            }
            if ((covered / b).to_double() >= coverage_target) stop = true;
            if (static_cast<long>(raw.size()) >= budgets.max_branches) {
                stop = true;
                lvl.sweep.branch_cap = true;
            }
            active = std::move(next);
            ++t_round;
            lvl.sweep.rounds = t_round;
            if (t_round > budgets.max_return_time) break;
        }
    }

    // 4. s-walk with targeted branch resolution along the critical returns.
    // Branches already known from the sweep are reused; on budget or
    // precision failures the level is kept with the word unresolved.
    lvl.central_return = abs(walk.orbit[static_cast<size_t>(v)]) <= z;
    std::vector<Real> word_mids;
    std::vector<long> word_times;
    bool word_ok = n <= budgets.word_depth;
    NestOutcome walk_fail = NestOutcome::Completed;
    if (word_ok) {
        Real y = walk.orbit[static_cast<size_t>(v)];
        long s = 1;
        long work = v;
        while (abs(y) > z) {
            if (s >= budgets.max_s || work >= budgets.max_level_work) {
                word_ok = false;
                walk_fail = NestOutcome::BudgetExhausted;
                break;
            }
            const RawBranch* known = nullptr;
            for (const RawBranch& rb : raw) {
                if (rb.domain.contains(y)) {
                    known = &rb;
                    break;
                }
                RealInterval mirror(-rb.domain.hi, -rb.domain.lo);
                if (mirror.contains(y)) {
                    known = &rb; // same return time on the mirrored side
                    break;
                }
            }
            long r;
            if (known) {
                r = known->r;
                word_mids.push_back(y);
                word_times.push_back(r);
                y = map.iterate(y, r);
                work += r;
            } else {
                WalkResult wr = first_entry(map, y, b, budgets.max_return_time, false);
                if (wr.status != WalkResult::Status::Returned) {
                    word_ok = false;
                    walk_fail = wr.status == WalkResult::Status::Sink
                                    ? NestOutcome::SinkDetected
                                    : (wr.status == WalkResult::Status::Precision
                                           ? NestOutcome::PrecisionExhausted
                                           : NestOutcome::BudgetExhausted);
                    break;
                }
                Chain ch = pull_back_branch(map, wr.orbit, wr.steps, I);
                if (!ch.ok) {
                    word_ok = false;
                    walk_fail = NestOutcome::PrecisionExhausted;
                    break;
                }
                RawBranch tb;
                tb.domain = ch.result;
                tb.r = wr.steps;
                tb.orientation = ch.orientation;
                tb.targeted = true;
                raw.push_back(tb);
                word_mids.push_back(tb.domain.mid());
                word_times.push_back(tb.r);
                y = wr.orbit[static_cast<size_t>(wr.steps)];
                work += 3 * wr.steps; // walk, pullback and verification cost
            }
            ++s;
        }
        if (word_ok) lvl.s = s;
    }
    if (!word_ok) {
        lvl.s = 0; // unresolved
        word_mids.clear();
        word_times.clear();
    }
    out.stats_fail = walk_fail;

    // 5. assemble branches, positions, word, coverage
    assign_positions(lvl, raw, map);
    lvl.word_resolved = word_ok;
    for (size_t i = 0; i < word_mids.size(); ++i) {
        const Branch* brc = lvl.branch_containing(word_mids[i]);
        if (!brc) {
            lvl.word_resolved = false;
            break;
        }
        lvl.critical_word.push_back(brc->index);
        lvl.critical_word_times.push_back(word_times[i]);
    }
    lvl.tau = lvl.central_return ? 0
                                 : (lvl.word_resolved && !lvl.critical_word.empty()
                                        ? std::optional<int>(lvl.critical_word.front())
                                        : std::nullopt);
    Real total_len(0.0, map.bits());
    for (const Branch& brc : lvl.branches) total_len += brc.domain.length();
    lvl.coverage = ((total_len + z * 2.0) / (b * 2.0)).to_double();

    out.ok = true;
    out.level = std::move(lvl);
    out.next_I = out.level.central;
    return out;
}

} // namespace

NestResult build_nest(const QuadraticMap& map, int kappa, int depth, double coverage_target,
                      NestBudgets budgets) {
    if (depth < 0) throw DomainError("depth must be >= 0");
    if (coverage_target >= 1.0) throw DomainError("coverage_target must be < 1");
    NestResult res;
    res.bits = map.bits();
    res.kappa = kappa;
    if (depth == 0) return res;

    OrientationReversingPoint start = orientation_reversing_fixed_point(map, kappa);
    RealInterval I = start.interval;

    int cascade = 0;
    for (int n = 0; n < depth; ++n) {
        LevelBuild lb = build_level(map, n, I, coverage_target, budgets);
        if (!lb.ok) {
            res.outcome = lb.fail;
            res.outcome_level = n;
            return res;
        }
        if (lb.trivial) {
            if (!budgets.auto_descend) {
                res.outcome = NestOutcome::NotRenormalizableDeeper;
                res.outcome_level = n;
                return res;
            }
            ++res.descents;
        }
        if (lb.level.central_return)
            ++cascade;
        else
            cascade = 0;
        res.levels.push_back(std::move(lb.level));
        I = lb.next_I;
        if (lb.stats_fail != NestOutcome::Completed && n <= budgets.word_depth) {
            // the level itself is valid; the walk to the next landing was not
            res.outcome = lb.stats_fail;
            res.outcome_level = n;
            return res;
        }
        if (cascade > budgets.max_central_cascade) {
            res.outcome = NestOutcome::CascadeBudget;
            res.outcome_level = n;
            return res;
        }
    }
    res.outcome = NestOutcome::Completed;
    res.outcome_level = depth - 1;
    return res;
}

std::vector<LandingComponent> landing_components(const QuadraticMap& map, const NestLevel& level,
                                                 int max_word_len, double coverage_target,
                                                 long max_components) {
    if (level.kind != LevelKind::Return)
        throw DomainError("landing components need a level with return structure");
    const Real& tol = map.tol();
    std::vector<LandingComponent> out;
    LandingComponent root;
    root.C = level.central;
    root.total_time = 0;
    out.push_back(root);

    Real target_len = level.I.length() * coverage_target;
    Real covered = level.central.length();
    Real floor_len = tol * 100.0;

    std::vector<const Branch*> order;
    for (const Branch& b : level.branches) order.push_back(&b);
    std::sort(order.begin(), order.end(),
              [](const Branch* x, const Branch* y) { return x->index < y->index; });

    size_t frontier_begin = 0;
    for (int len = 1; len <= max_word_len; ++len) {
        size_t frontier_end = out.size();
        if (covered >= target_len) break;
        for (size_t i = frontier_begin; i < frontier_end; ++i) {
            if (static_cast<long>(out.size()) >= max_components) break;
            if (covered >= target_len) break;
            LandingComponent base = out[i]; // copy: out grows below
            if (base.C.length() < floor_len) continue;
            for (const Branch* br : order) {
                if (static_cast<long>(out.size()) >= max_components) break;
                try {
                    RealInterval C =
                        monotone_preimage(map, static_cast<int>(br->return_time), base.C,
                                          br->domain, tol);
                    LandingComponent lc;
                    lc.word.push_back(br->index);
                    lc.word.insert(lc.word.end(), base.word.begin(), base.word.end());
                    lc.C = C;
                    lc.total_time = br->return_time + base.total_time;
                    covered += C.length();
                    out.push_back(std::move(lc));
                } catch (const Error&) {
                    continue; // component below resolution inside this branch
                }
            }
        }
        frontier_begin = frontier_end;
        if (frontier_begin == out.size()) break;
    }
    std::sort(out.begin(), out.end(),
              [](const LandingComponent& x, const LandingComponent& y) { return x.C.lo < y.C.lo; });
    return out;
}

GapeInterval gape_interval(const QuadraticMap& map, const NestResult& nest, int i) {
    if (i <= 1) throw DomainError("gape interval is defined for i > 1");
    if (static_cast<int>(nest.levels.size()) <= i - 1)
        throw DomainError("gape interval needs level " + std::to_string(i - 1));
    const NestLevel& prev = nest.levels[static_cast<size_t>(i - 1)];
    if (prev.kind != LevelKind::Return) {
        // renormalization level: the word is empty and the gape degenerates
        GapeInterval g;
        g.i = i;
        g.interval = prev.central;
        return g;
    }
    if (!prev.word_resolved) throw WordNotFound("critical landing word unresolved at level " +
                                                std::to_string(i - 1));
    const Real& tol = map.tol();
    const RealInterval& Ii = prev.central; // I_i

    if (prev.critical_word.empty()) {
        GapeInterval g;
        g.i = i;
        g.interval = Ii;
        return g;
    }
    // word domain I^d_{i-1}
    RealInterval D;
    {
        const Branch* last = prev.branch_by_index(prev.critical_word.back());
        if (!last) throw WordNotFound("branch of the landing word missing");
        D = last->domain;
        for (int k = static_cast<int>(prev.critical_word.size()) - 2; k >= 0; --k) {
            const Branch* br = prev.branch_by_index(prev.critical_word[static_cast<size_t>(k)]);
            if (!br) throw WordNotFound("branch of the landing word missing");
            D = monotone_preimage(map, static_cast<int>(br->return_time), D, br->domain, tol);
        }
    }
    // pull D back through the folding central branch f^{v_{i-1}} | I_i
    long v = prev.v;
    Real b_i = Ii.hi;
    Real F0 = map.iterate(Real(0.0, map.bits()), v);
    Real Fb = map.iterate(b_i, v);
    Real e = (Fb > F0) ? D.hi : D.lo;
    Real g_end;
    if ((Fb > F0 && e >= Fb) || (Fb < F0 && e <= Fb)) {
        g_end = b_i; // word domain reaches the boundary of the image
    } else {
        auto h = [&](const Real& x) { return map.iterate(x, v) - e; };
        g_end = bisect_root(h, RealInterval(Real(0.0, map.bits()), b_i), tol);
    }
    GapeInterval g;
    g.i = i;
    g.interval = RealInterval(-g_end, g_end);
    return g;
}

HyperbolicityReport branch_hyperbolicity(const QuadraticMap& map, const NestLevel& level) {
    HyperbolicityReport rep;
    const double phi = 0.6180339887498949;
    for (const Branch& br : level.branches) {
        long r = br.return_time;
        auto prof = [&](const Real& x) {
            auto [sum, ok] = map.log_deriv_sum(x, r);
            return ok ? sum.to_double() : -1e300;
        };
        Real lo = br.domain.lo, hi = br.domain.hi;
        double best = std::min(prof(lo), prof(hi));
        Real x1 = hi - (hi - lo) * phi;
        Real x2 = lo + (hi - lo) * phi;
        double f1 = prof(x1), f2 = prof(x2);
        for (int it = 0; it < 40; ++it) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - (hi - lo) * phi;
                f1 = prof(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + (hi - lo) * phi;
                f2 = prof(x2);
            }
        }
        Real at = f1 < f2 ? x1 : x2;
        best = std::min(best, std::min(f1, f2));
        BranchExpansion be;
        be.index = br.index;
        be.lambda = best / static_cast<double>(r);
        be.at_point = at;
        rep.branch_lambdas.push_back(std::move(be));
    }
    for (const BranchExpansion& be : rep.branch_lambdas)
        if (!rep.lambda_inf || be.lambda < *rep.lambda_inf) rep.lambda_inf = be.lambda;
    return rep;
}

ExpansionFit expansion_outside(const QuadraticMap& map, const RealInterval& I, int n_max,
                               int samples) {
    if (samples <= 0) throw NoAvoidingOrbits("no samples");
    std::vector<std::vector<double>> logsums; // per sample, prefix sums while avoiding I
    for (int i = 0; i < samples; ++i) {
        double xi = -1.0 + 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(samples);
        Real x(xi, map.bits());
        if (I.contains_strict(x)) continue;
        std::vector<double> pref;
        double acc = 0.0;
        Real y = x;
        for (int k = 0; k < n_max; ++k) {
            if (I.contains_strict(y) && k > 0) break;
            double d = abs(map.deriv(y)).to_double();
            if (d <= 0.0) break;
            acc += std::log(d);
            pref.push_back(acc);
            y = map.eval(y);
        }
        if (!pref.empty()) logsums.push_back(std::move(pref));
    }
    if (logsums.empty()) throw NoAvoidingOrbits("all samples enter the interval immediately");

    ExpansionFit fit;
    fit.samples_avoiding = static_cast<int>(logsums.size());
    std::vector<std::pair<double, double>> pts; // (n, min over samples of logsum_n)
    for (int n = 1; n <= n_max; ++n) {
        double m = 1e300;
        bool any = false;
        for (const auto& p : logsums) {
            if (static_cast<int>(p.size()) >= n) {
                m = std::min(m, p[static_cast<size_t>(n - 1)]);
                any = true;
            }
        }
        if (any) pts.emplace_back(static_cast<double>(n), m);
    }
    size_t lo = pts.size() / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double cnt = 0;
    for (size_t i = lo; i < pts.size(); ++i) {
        sx += pts[i].first;
        sy += pts[i].second;
        sxx += pts[i].first * pts[i].first;
        sxy += pts[i].first * pts[i].second;
        cnt += 1;
    }
    if (cnt < 2) {
        fit.lambda_hat = pts.empty() ? 0.0 : std::exp(pts.back().second / pts.back().first);
        fit.c_hat = 1.0;
        fit.n_used = static_cast<int>(pts.size());
        return fit;
    }
    double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    double intercept = (sy - slope * sx) / cnt;
    fit.lambda_hat = std::exp(slope);
    fit.c_hat = std::exp(intercept);
    fit.n_used = static_cast<int>(cnt);
    return fit;
}

NestStatistics nest_statistics_check(const QuadraticMap& map, const NestResult& nest,
                                     long audit_branches_per_level) {
    NestStatistics st;
    for (const NestLevel& lvl : nest.levels) {
        NestStatistics::LevelRow row;
        row.n = lvl.n;
        row.c = lvl.c;
        row.s = lvl.s;
        row.v = lvl.v;
        if (lvl.s >= 1 && lvl.c > 0.0 && lvl.c < 1.0) {
            row.ln_s_over_ln_cinv = std::log(static_cast<double>(lvl.s)) / -std::log(lvl.c);
            row.ratio_defined = true;
        }
        st.rows.push_back(row);
    }
    for (size_t i = 0; i + 1 < nest.levels.size(); ++i)
        if (nest.levels[i + 1].c > nest.levels[i].c) st.c_inv_monotone = false;

    // additivity: r_{n+1}(j) = v_n + sum of r_n over the traversed branches
    for (size_t i = 0; i + 1 < nest.levels.size(); ++i) {
        const NestLevel& lo = nest.levels[i];
        const NestLevel& hi = nest.levels[i + 1];
        if (lo.kind != LevelKind::Return || hi.kind != LevelKind::Return) continue;
        long audited = 0;
        for (const Branch& br : hi.branches) {
            if (audited >= audit_branches_per_level) break;
            ++audited;
            // a level-(n+1) branch decomposes as the central branch of level n
            // followed by noncentral level-n branches until the orbit lands
            // back in I_{n+1}
            long total = lo.v;
            Real cur = map.iterate(br.mid(), lo.v);
            bool skip = false;
            while (!hi.I.contains(cur)) {
                const Branch* inb = lo.branch_containing(cur);
                if (!inb || total > br.return_time) {
                    skip = true;
                    break;
                }
                total += inb->return_time;
                cur = map.iterate(cur, inb->return_time);
            }
            if (skip) {
                ++st.additivity_skipped;
                continue;
            }
            ++st.additivity_checked;
            if (total != br.return_time) ++st.additivity_failures;
        }
        // v ordering: s_n <= v_{n+1} <= s_n * max branch time (central included)
        long max_r = lo.v;
        for (const Branch& brr : lo.branches) max_r = std::max(max_r, brr.return_time);
        if (!(lo.s <= hi.v && hi.v <= lo.s * max_r)) st.v_order_ok = false;
    }
    return st;
}

std::optional<RealInterval> preimage_component(const QuadraticMap& map, const RealInterval& J,
                                               int side) {
    bool ok = true;
    RealInterval r = pull_once(map, J, side, ok);
    if (!ok) return std::nullopt;
    return r;
}

std::optional<RealInterval> chain_pullback(const QuadraticMap& map,
                                           const std::vector<signed char>& signs,
                                           const RealInterval& target) {
    RealInterval J = target;
    for (size_t k = signs.size(); k-- > 0;) {
        bool ok = true;
        J = pull_once(map, J, signs[k], ok);
        if (!ok) return std::nullopt;
    }
    return J;
}

std::vector<signed char> orbit_signs(const QuadraticMap& map, const Real& x, long n) {
    std::vector<signed char> out;
    out.reserve(static_cast<size_t>(n));
    Real y = x.at_precision(map.bits());
    for (long k = 0; k < n; ++k) {
        if (y.is_zero()) return {};
        out.push_back(static_cast<signed char>(y.sign()));
        y = map.eval(y);
    }
    return out;
}

nlohmann::json nest_report_json(const QuadraticMap& map, const NestResult& nest) {
    nlohmann::json j;
    j["schema"] = "nestlab-nest-v1";
    j["a"] = map.a_decimal();
    j["bits"] = static_cast<long>(nest.bits);
    j["kappa"] = nest.kappa;
    j["descents"] = nest.descents;
    j["outcome"] = to_string(nest.outcome);
    j["outcome_level"] = nest.outcome_level;
    nlohmann::json levels = nlohmann::json::array();
    for (const NestLevel& lvl : nest.levels) {
        nlohmann::json L;
        L["n"] = lvl.n;
        L["kind"] = lvl.kind == LevelKind::Return ? "return" : "renormalization";
        L["lo"] = lvl.I.lo.str();
        L["hi"] = lvl.I.hi.str();
        L["central_lo"] = lvl.central.lo.str();
        L["central_hi"] = lvl.central.hi.str();
        L["c"] = lvl.c;
        L["s"] = lvl.s;
        L["v"] = lvl.v;
        if (lvl.tau)
            L["tau"] = *lvl.tau;
        else
            L["tau"] = nullptr;
        L["central_return"] = lvl.central_return;
        L["coverage"] = lvl.coverage;
        nlohmann::json branches = nlohmann::json::array();
        for (const Branch& br : lvl.branches)
            branches.push_back({{"j", br.index},
                                {"lo", br.domain.lo.str()},
                                {"hi", br.domain.hi.str()},
                                {"r", br.return_time},
                                {"orientation", br.orientation},
                                {"targeted", br.targeted}});
        L["branches"] = std::move(branches);
        nlohmann::json word = nlohmann::json::array();
        for (int w : lvl.critical_word) word.push_back(w);
        L["critical_word"] = std::move(word);
        levels.push_back(std::move(L));
    }
    j["levels"] = std::move(levels);
    return j;
}

} // namespace nestlab
