#include "nestlab/orbitstats.hpp"

#include <algorithm>
#include <cmath>

namespace nestlab {

CEReport ce_exponent(const QuadraticMap& map, long n_max, double window) {
    if (n_max < 10) throw DomainError("ce_exponent needs n_max >= 10");
    CEReport rep;
    rep.n_max = n_max;
    rep.bits = map.bits();
    rep.series.reserve(static_cast<size_t>(n_max));

    Real hit_tol = map.tol() * 10.0;
    Real y = map.eval(Real(0.0, map.bits())); // critical value f(0)
    Real logsum(0.0, map.bits());
    for (long n = 1; n <= n_max; ++n) {
        Real d = abs(map.deriv(y));
        // y = f^n(0) here; an exact critical hit kills all later derivatives
        if (abs(y) <= hit_tol) {
            rep.critical_hit = n;
            break;
        }
        logsum += log(d);
        rep.series.push_back((logsum / static_cast<double>(n)).to_double());
        y = map.eval(y);
    }
    long have = static_cast<long>(rep.series.size());
    if (have > 0) {
        long w0 = std::max<long>(1, static_cast<long>(static_cast<double>(have) * window));
        double m = rep.series[static_cast<size_t>(w0 - 1)];
        for (long n = w0; n <= have; ++n)
            m = std::min(m, rep.series[static_cast<size_t>(n - 1)]);
        rep.liminf_proxy = m;
    }
    return rep;
}

RecurrenceReport recurrence_exponent(const QuadraticMap& map, long n_max, double alpha,
                                     double window) {
    if (n_max < 10) throw DomainError("recurrence_exponent needs n_max >= 10");
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    RecurrenceReport rep;
    rep.n_max = n_max;
    rep.alpha = alpha;
    rep.bits = map.bits();

    Real hit_tol = map.tol() * 10.0;
    Real y = map.eval(Real(0.0, map.bits()));
    Real closest(2.0, map.bits());
    for (long n = 1; n <= n_max; ++n) {
        Real d = abs(y);
        if (d <= hit_tol) {
            rep.critical_hit = n;
            break;
        }
        if (n >= 2) rep.subexp_margins.push_back((d * exp(Real(alpha * n, map.bits()))).to_double());
        if (d < closest) {
            closest = d;
            rep.closest_returns.emplace_back(n, d.to_double());
        }
        y = map.eval(y);
    }
    long reached = rep.critical_hit ? *rep.critical_hit - 1 : n_max;
    long w0 = std::max<long>(2, static_cast<long>(static_cast<double>(reached) * window));
    double proxy = 0.0;
    for (const auto& [n, dist] : rep.closest_returns) {
        if (n < w0) continue;
        proxy = std::max(proxy, -std::log(dist) / std::log(static_cast<double>(n)));
    }
    rep.exponent_proxy = proxy;
    return rep;
}

namespace {

inline double step(double a, double x) { return a - 1.0 - a * x * x; }

} // namespace

double birkhoff_average(const QuadraticMap& map, double x0, const BirkhoffSpec& obs, long n) {
    if (n < 1) throw DomainError("birkhoff_average needs N >= 1");
    double a = map.a().to_double();
    double x = x0, sum = 0.0;
    for (long k = 0; k < n; ++k) {
        if (obs.kind == Observable::identity)
            sum += x;
        else
            sum += (x >= obs.ind_lo && x <= obs.ind_hi) ? 1.0 : 0.0;
        x = step(a, x);
    }
    return sum / static_cast<double>(n);
}

AutocorrResult autocorrelation(const QuadraticMap& map, double x0, const std::vector<long>& lags,
                               long n) {
    AutocorrResult res;
    double a = map.a().to_double();
    long maxlag = 0;
    for (long l : lags) maxlag = std::max(maxlag, l);
    if (n <= maxlag + 1) throw DomainError("autocorrelation needs N >> max lag");

    // burn-in so the statistic reflects the attractor, not the transient
    long burn = std::min<long>(1000, n / 10);
    long m = n - burn;
    std::vector<double> xs(static_cast<size_t>(m));
    double x = x0;
    for (long k = 0; k < burn; ++k) x = step(a, x);
    for (long k = 0; k < m; ++k) {
        xs[static_cast<size_t>(k)] = x;
        x = step(a, x);
    }
    double mean = 0.0;
    for (double v : xs) mean += v;
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (double v : xs) var += (v - mean) * (v - mean);
    var /= static_cast<double>(m);
    if (var < 1e-18) {
        res.degenerate_variance = true;
        for (long l : lags) res.rho.emplace_back(l, l == 0 ? 1.0 : 0.0);
        return res;
    }
    for (long l : lags) {
        double acc = 0.0;
        for (long k = 0; k + l < m; ++k)
            acc += (xs[static_cast<size_t>(k)] - mean) * (xs[static_cast<size_t>(k + l)] - mean);
        acc /= static_cast<double>(m - l);
        res.rho.emplace_back(l, acc / var);
    }
    return res;
}

Histogram acim_histogram(const QuadraticMap& map, double x0, int bins, long n) {
    if (bins < 2) throw DomainError("histogram needs at least 2 bins");
    Histogram h;
    h.density.assign(static_cast<size_t>(bins), 0.0);
    h.samples = n;
    if (n == 0) {
        h.empty_orbit = true;
        return h;
    }
    double a = map.a().to_double();
    double x = x0;
    double w = 2.0 / static_cast<double>(bins);
    std::vector<long> counts(static_cast<size_t>(bins), 0);
    for (long k = 0; k < n; ++k) {
        int b = static_cast<int>((x + 1.0) / w);
        if (b < 0) b = 0;
        if (b >= bins) b = bins - 1;
        counts[static_cast<size_t>(b)]++;
        x = step(a, x);
    }
    for (int b = 0; b < bins; ++b)
        h.density[static_cast<size_t>(b)] =
            static_cast<double>(counts[static_cast<size_t>(b)]) / (static_cast<double>(n) * w);
    return h;
}

} // namespace nestlab
