#include "nestlab/exclusion.hpp"

#include <algorithm>
#include <cmath>

namespace nestlab {

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

double counter_uniform(uint64_t seed, uint64_t stream, uint64_t counter) {
    uint64_t u = mix64(seed ^ mix64(stream ^ mix64(counter)));
    // 53-bit mantissa, shifted into (0,1)
    return (static_cast<double>(u >> 11) + 0.5) * 0x1.0p-53;
}

ExclusionReport exclusion_simulation(const ExclusionModel& model, double eps) {
    if (model.trials < 1) throw DomainError("trials must be >= 1");
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    for (size_t i = 0; i < model.c_schedule.size(); ++i) {
        double c = model.c_schedule[i];
        if (!(c > 0.0 && c < 1.0)) throw DomainError("schedule entries must be in (0,1)");
        if (i > 0 && !(c < model.c_schedule[i - 1]))
            throw DomainError("schedule must be strictly decreasing");
    }

    ExclusionReport rep;
    rep.eps = eps;
    rep.trials = model.trials;
    rep.seed = model.seed;

    for (size_t lvl = 0; lvl < model.c_schedule.size(); ++lvl) {
        double c = model.c_schedule[lvl];
        double log1mc = std::log1p(-c);
        double lncinv = -std::log(c);
        double win_lo = std::pow(c, -1.0 + 2.0 * eps);
        double win_hi = std::pow(c, -1.0 - eps);
        long k2 = static_cast<long>(std::ceil(1.0 / c));

        std::vector<double> s_values(static_cast<size_t>(model.trials));
        long in_window = 0, tail1 = 0, tail2 = 0;
        for (long t = 0; t < model.trials; ++t) {
            double u = counter_uniform(model.seed, static_cast<uint64_t>(lvl),
                                       static_cast<uint64_t>(t));
            // geometric from 1: P(s = k) = (1-c)^{k-1} c
            double s = 1.0 + std::floor(std::log(u) / log1mc);
            s_values[static_cast<size_t>(t)] = s;
            if (s > win_lo && s < win_hi) ++in_window;
            if (s > 1.0) ++tail1;
            if (s > static_cast<double>(k2)) ++tail2;
        }

        ExclusionLevelStats st;
        st.c = c;
        st.low_trials = model.trials < 16;
        size_t mid = s_values.size() / 2;
        std::nth_element(s_values.begin(), s_values.begin() + static_cast<long>(mid),
                         s_values.end());
        st.median_ratio = std::log(s_values[mid]) / lncinv;
        double n = static_cast<double>(model.trials);
        st.window_prob = static_cast<double>(in_window) / n;
        st.escape_prob = 1.0 - st.window_prob;
        st.escape_bound = std::pow(c, eps);
        st.escape_sigma = std::sqrt(std::max(st.escape_prob * (1.0 - st.escape_prob), 1e-12) / n);

        for (long k : {1L, k2}) {
            TailPoint tp;
            tp.k = k;
            tp.empirical = static_cast<double>(k == 1 ? tail1 : tail2) / n;
            tp.expected = std::exp(static_cast<double>(k) * log1mc);
            tp.sigma = std::sqrt(std::max(tp.expected * (1.0 - tp.expected), 1e-12) / n);
            st.tails.push_back(tp);
        }
        rep.levels.push_back(std::move(st));
    }
    return rep;
}

} // namespace nestlab
