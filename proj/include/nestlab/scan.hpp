// Batch parameter scanning with deterministic parallel output.
#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "nestlab/nest.hpp"
#include "nestlab/orbitstats.hpp"

namespace nestlab {

struct ScanBudgets {
    long classify_iters = 3000;
    int period_budget = 64;
    long ce_n = 150;
    long rec_n = 150;
    double rec_alpha = 0.05;
    int nest_depth = 3;
};

struct ScanRecord {
    double a = 0.0;
    std::string classification;
    int period = 0;
    std::optional<double> multiplier;
    int kappa = 0;
    std::optional<double> ce_liminf;
    std::optional<long> ce_critical_hit;
    std::optional<double> rec_exponent;
    std::optional<long> rec_critical_hit;
    int nest_depth_reached = 0;
    std::string nest_outcome;
    std::optional<double> c_1;
    std::optional<long> s_1;
    long runtime_ms = 0; // reported in JSON output only: CSV is byte-deterministic
};

struct ScanResult {
    std::vector<ScanRecord> records;
    double a_lo = 0.0, a_hi = 0.0;
    uint64_t seed = 0;
    mpfr_prec_t bits = 0;
};

// n_samples uniform draws in [a_lo, a_hi] (counter RNG, sorted); classify,
// CE/recurrence proxies and a targeted nest per sample. Output order is by
// parameter regardless of worker count.
ScanResult scan(double a_lo, double a_hi, int n_samples, const PrecisionContext& ctx,
                const ScanBudgets& budgets = {}, int workers = 1, uint64_t seed = 0);

std::string scan_csv(const ScanResult& res);
nlohmann::json scan_json(const ScanResult& res);

} // namespace nestlab
