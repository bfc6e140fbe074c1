// The principal nest: first return maps R_n, their branches, central
// components, landing components, gape intervals and per-level statistics.
#pragma once

#include <optional>
#include <vector>

#include "json.hpp"
#include "nestlab/renorm.hpp"

namespace nestlab {

struct Branch {
    int index = 0; // 0 reserved for the central component; sign = side of 0
    RealInterval domain;
    long return_time = 0;
    int orientation = 0; // sign of Df^r on the branch
    bool targeted = false;

    Real mid() const { return domain.mid(); }
};

enum class LevelKind { Return, TrivialDescent };

// One level of the nest. For a Return level, `central` is I_{n+1}, `v` is
// the first return time of the critical point and `branches` holds the
// noncentral components found. A TrivialDescent level records a
// renormalization: every point of I returns at time v, so the nest continues
// inside [-p, p] for the orientation reversing fixed point p of f^v|I.
struct NestLevel {
    int n = 0;
    LevelKind kind = LevelKind::Return;
    RealInterval I;
    RealInterval central;
    std::vector<Branch> branches; // noncentral, sorted by position
    bool central_return = false;
    double c = 0.0; // |I_{n+1}| / |I_n|
    long s = 0;     // returns of 0 to I_n until the first landing in I_{n+1}
    long v = 0;     // central branch return time (f-iterates)
    std::optional<int> tau;
    double coverage = 0.0;
    bool word_resolved = false;
    std::vector<int> critical_word;        // positional branch indices, length s-1
    std::vector<long> critical_word_times; // their return times

    struct SweepStats {
        long dropped_width = 0;
        long dropped_time = 0;
        long dropped_marginal = 0;
        long solve_failures = 0;
        long rounds = 0;
        bool branch_cap = false;
    } sweep;

    const Branch* branch_by_index(int j) const;
    const Branch* branch_containing(const Real& x) const;
};

enum class NestOutcome {
    Completed,        // reached requested depth
    CriticalEscape,   // critical orbit never re-entered I_n within budget
    SinkDetected,     // critical orbit converged to an attracting cycle
    PrecisionExhausted,
    CascadeBudget,    // too many consecutive central returns
    BudgetExhausted,  // a non-cascade work budget ran out
    NotRenormalizableDeeper // trivial level but no orientation reversing point
};

const char* to_string(NestOutcome o);

struct NestBudgets {
    long max_return_time = 200000;
    long max_s = 200000;
    long max_branches = 400;
    long max_level_work = 4000000; // total f-steps walked per level
    int max_central_cascade = 32;
    bool sweep = true;         // discover noncentral branches by subdivision
    int sweep_depth = 1 << 20; // sweep only levels n <= sweep_depth
    int word_depth = 1 << 20;  // resolve s and the critical word for n <= word_depth
    bool auto_descend = true;  // continue through trivial (renormalizable) levels
};

struct NestResult {
    std::vector<NestLevel> levels;
    NestOutcome outcome = NestOutcome::Completed;
    int outcome_level = 0;
    int kappa = 0;    // starting renormalization depth
    int descents = 0; // trivial levels crossed
    mpfr_prec_t bits = 0;
};

// Build `depth` levels of the principal nest starting at I_0 = [-p_kappa, p_kappa].
// Throws NotInDelta if the starting interval does not exist; everything else
// is reported as an outcome with the levels built so far.
NestResult build_nest(const QuadraticMap& map, int kappa, int depth,
                      double coverage_target = 0.99, NestBudgets budgets = {});

struct LandingComponent {
    std::vector<int> word; // noncentral branch indices; empty = I_{n+1} itself
    RealInterval C;
    long total_time = 0; // sum of branch return times along the word
};

// Components of the first landing map from I_n to I_{n+1}, breadth-first in
// word length until coverage or budgets stop the enumeration.
std::vector<LandingComponent> landing_components(const QuadraticMap& map, const NestLevel& level,
                                                 int max_word_len, double coverage_target,
                                                 long max_components = 4096);

struct GapeInterval {
    int i = 0;             // gape interval \tilde I_{i+1}
    RealInterval interval;
};

// Pullback of the word-domain I^d_{i-1} through the central branch of level
// i-1, where d is the critical landing word. Defined for i > 1.
GapeInterval gape_interval(const QuadraticMap& map, const NestResult& nest, int i);

struct BranchExpansion {
    int index = 0;
    double lambda = 0.0; // ln|Df^r| / r at the minimizing point
    Real at_point;
};
struct HyperbolicityReport {
    std::vector<BranchExpansion> branch_lambdas;
    std::optional<double> lambda_inf; // inf over noncentral branches
};
HyperbolicityReport branch_hyperbolicity(const QuadraticMap& map, const NestLevel& level);

struct ExpansionFit {
    double c_hat = 0.0;
    double lambda_hat = 0.0;
    int n_used = 0;
    int samples_avoiding = 0;
};
// Minimal expansion along orbits avoiding I, fitted as |Df^n| ~ C lambda^n.
ExpansionFit expansion_outside(const QuadraticMap& map, const RealInterval& I, int n_max,
                               int samples);

struct NestStatistics {
    struct LevelRow {
        int n = 0;
        double ln_s_over_ln_cinv = 0.0;
        double c = 0.0;
        long s = 0;
        long v = 0;
        bool ratio_defined = false;
    };
    std::vector<LevelRow> rows;
    bool c_inv_monotone = true;
    long additivity_checked = 0;
    long additivity_failures = 0;
    long additivity_skipped = 0; // decompositions crossing unresolved gaps
    bool v_order_ok = true;
};
NestStatistics nest_statistics_check(const QuadraticMap& map, const NestResult& nest,
                                     long audit_branches_per_level = 64);

nlohmann::json nest_report_json(const QuadraticMap& map, const NestResult& nest);

// Component of f^{-1}(J) on one side of the critical point (side = sign of
// the points tracked); empty if J lies above the critical value.
std::optional<RealInterval> preimage_component(const QuadraticMap& map, const RealInterval& J,
                                               int side);

// Pull `target` back through |signs| monotone steps of f, where signs[k]
// prescribes the side of f^k(x) along the orbit being shadowed.
std::optional<RealInterval> chain_pullback(const QuadraticMap& map,
                                           const std::vector<signed char>& signs,
                                           const RealInterval& target);

// Sign sequence of f^k(x), k = 0..n-1; empty if the orbit hits 0.
std::vector<signed char> orbit_signs(const QuadraticMap& map, const Real& x, long n);

} // namespace nestlab
