// Quasisymmetric constants of monotone correspondences and qs-capacity
// lower bounds over an explicit piecewise-power test family.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nestlab/numerics.hpp"

namespace nestlab {

struct MonotonePairs {
    std::vector<std::pair<double, double>> pts; // strictly increasing in both coords

    // Affine-normalize both coordinates to [0,1] at full precision before
    // dropping to double (the qs constant is scaling invariant).
    static MonotonePairs normalized(const std::vector<std::pair<Real, Real>>& pairs);
};

// Supremum of max(ratio, 1/ratio) of symmetric difference quotients of the
// piecewise-linear interpolant over a dyadic grid of triples (x-h, x, x+h).
// Throws NotMonotone for fewer than 3 pairs or non-monotone data.
double qs_constant(const MonotonePairs& pairs, int grid_depth = 8);

// Same sup taken over direct evaluations of a monotone function on [0,1].
double qs_constant_fn(const std::function<double(double)>& h, int grid_depth = 8);

// Increasing piecewise-power maps of [0,1]: up to `breakpoints` interior
// breakpoints on a uniform grid, per-segment exponents from a geometric
// lattice inside [1/max_exponent, max_exponent]. Candidates whose sampled
// qs constant exceeds k are excluded from the family (or, in strict mode,
// raise FamilyViolatesK).
struct PowerFamily {
    double max_exponent = 4.0;
    int breakpoints = 2;
    int image_steps = 7;   // lattice for interior image offsets
    double exponent_ratio = 1.1892071150027210667; // 2^(1/4) lattice step
    int qs_check_depth = 5;
    bool strict = false;
};

struct CapacityEstimate {
    double value = 0.0; // certified lower bound of the true capacity
    double k = 1.0;
    std::string family;
};

// Lower bound of the k-qs capacity p(X|T) by coordinate ascent over the
// family. X must be a set of disjoint subintervals of T.
CapacityEstimate capacity_lower_bound(const std::vector<RealInterval>& X, const RealInterval& T,
                                      double k, const PowerFamily& family = {});

// Double-precision core on normalized coordinates ([0,1], X sorted disjoint).
CapacityEstimate capacity_lower_bound_unit(const std::vector<std::pair<double, double>>& X,
                                           double k, const PowerFamily& family = {});

struct TreeCheck {
    bool holds = false;
    bool family_artifact = false; // violation caused by family truncation
    double slack = 0.0;           // rhs - lhs
    double lhs = 0.0;             // p(X|T) bound
    double cover = 0.0;           // p(U T^j | T) bound
    double sup_child = 0.0;       // sup_j p(X|T^j) bound
};

// Evaluates both sides of p(X|T) <= p(U T^j|T) * sup_j p(X|T^j) with the
// same family; both sides are lower bounds, so a violation is flagged as a
// family artifact rather than a disproof.
TreeCheck tree_subadditivity_check(const std::vector<RealInterval>& children,
                                   const RealInterval& T, const std::vector<RealInterval>& X,
                                   double k, const PowerFamily& family = {});

} // namespace nestlab
