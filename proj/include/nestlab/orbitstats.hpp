// Critical-orbit observables: expansion and recurrence proxies, Birkhoff
// averages, empirical invariant density, autocorrelation.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nestlab/quadratic.hpp"

namespace nestlab {

// series[n-1] = (1/n) ln |Df^n(f(0))|; liminf reported as the minimum over
// the tail window [n_max*window, n_max] (true limits are not computable).
struct CEReport {
    long n_max = 0;
    std::vector<double> series;
    double liminf_proxy = 0.0;
    std::optional<long> critical_hit; // n with f^n(0) = 0 at working tolerance
    mpfr_prec_t bits = 0;
};

CEReport ce_exponent(const QuadraticMap& map, long n_max, double window = 0.5);

// Recurrence of the critical orbit measured by |f^n(0)|.
// exponent_proxy is evaluated on closest-return records inside the tail
// window (max of -ln|f^n(0)| / ln n over record times n); 0 if no record
// falls in the window, which is the stationary-orbit behavior.
struct RecurrenceReport {
    long n_max = 0;
    double alpha = 0.0;
    double exponent_proxy = 0.0;
    std::vector<double> subexp_margins; // |f^n(0)| e^{alpha n}, n = 2..n_max
    std::vector<std::pair<long, double>> closest_returns; // (n, |f^n(0)|) records
    std::optional<long> critical_hit;
    mpfr_prec_t bits = 0;
};

RecurrenceReport recurrence_exponent(const QuadraticMap& map, long n_max, double alpha,
                                     double window = 0.5);

// Monte Carlo estimators run in double precision: their errors are
// statistical (N^{-1/2}), far above rounding noise.
enum class Observable { identity, indicator };

struct BirkhoffSpec {
    Observable kind = Observable::identity;
    double ind_lo = -1.0, ind_hi = 1.0; // used when kind == indicator
};

double birkhoff_average(const QuadraticMap& map, double x0, const BirkhoffSpec& obs, long n);

struct AutocorrResult {
    std::vector<std::pair<long, double>> rho;
    bool degenerate_variance = false;
};
AutocorrResult autocorrelation(const QuadraticMap& map, double x0, const std::vector<long>& lags,
                               long n);

struct Histogram {
    std::vector<double> density; // normalized: sum(density)*width = 1
    double lo = -1.0, hi = 1.0;
    long samples = 0;
    bool empty_orbit = false;
    double width() const { return density.empty() ? 0.0 : (hi - lo) / static_cast<double>(density.size()); }
};
Histogram acim_histogram(const QuadraticMap& map, double x0, int bins, long n);

} // namespace nestlab
