// Random model for the return counts s_n: independent uniform landings give
// geometric s with success probability c_n per trial.
#pragma once

#include <cstdint>
#include <vector>

#include "nestlab/errors.hpp"

namespace nestlab {

// Counter-based generator: reproducible under any parallel schedule.
uint64_t mix64(uint64_t x);
double counter_uniform(uint64_t seed, uint64_t stream, uint64_t counter); // in (0,1)

struct ExclusionModel {
    std::vector<double> c_schedule; // decreasing, 0 < c < 1
    long trials = 0;
    uint64_t seed = 0;
};

struct TailPoint {
    long k = 0;
    double empirical = 0.0; // P(s > k)
    double expected = 0.0;  // (1-c)^k
    double sigma = 0.0;     // binomial MC error
};

struct ExclusionLevelStats {
    double c = 0.0;
    double median_ratio = 0.0; // median of ln s / ln c^{-1}
    double window_prob = 0.0;  // P(c^{-1+2eps} < s < c^{-1-eps})
    double escape_prob = 0.0;
    double escape_bound = 0.0; // c^eps
    double escape_sigma = 0.0;
    std::vector<TailPoint> tails; // at k = 1 and k = ceil(1/c)
    bool low_trials = false;
};

struct ExclusionReport {
    std::vector<ExclusionLevelStats> levels;
    double eps = 0.0;
    long trials = 0;
    uint64_t seed = 0;
};

ExclusionReport exclusion_simulation(const ExclusionModel& model, double eps);

} // namespace nestlab
