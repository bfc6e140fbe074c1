#include "nestlab/quadratic.hpp"

namespace nestlab {

QuadraticMap::QuadraticMap(const Real& a, PrecisionContext ctx)
    : a_(a.at_precision(ctx.bits)), ctx_(std::move(ctx)), a_dec_(a_.str()) {
    validate();
}

QuadraticMap::QuadraticMap(const std::string& a_dec, PrecisionContext ctx)
    : a_(a_dec, ctx.bits), ctx_(std::move(ctx)), a_dec_(a_dec) {
    validate();
}

QuadraticMap::QuadraticMap(double a, PrecisionContext ctx)
    : a_(a, ctx.bits), ctx_(std::move(ctx)), a_dec_(a_.str()) {
    validate();
}

void QuadraticMap::validate() const {
    if (a_.is_nan() || a_ < 0.5 || a_ > 2.0)
        throw DomainError("quadratic parameter must satisfy 1/2 <= a <= 2, got " + a_.str(20));
}

QuadraticMap QuadraticMap::with_context(PrecisionContext ctx) const {
    return QuadraticMap(a_dec_, std::move(ctx));
}

Real QuadraticMap::eval(const Real& x) const {
    if (abs(x) > Real(1.0, ctx_.bits) + ctx_.tol)
        throw DomainError("point outside [-1,1]: " + x.str(20));
    return a_ - 1.0 - a_ * x * x;
}

Real QuadraticMap::iterate(const Real& x, long n) const {
    Real y = x.at_precision(ctx_.bits);
    for (long k = 0; k < n; ++k) y = eval(y);
    return y;
}

Orbit QuadraticMap::orbit(const Real& x0, long n) const {
    Orbit o;
    o.points.reserve(static_cast<size_t>(n) + 1);
    o.derivs.reserve(static_cast<size_t>(n) + 1);
    Real y = x0.at_precision(ctx_.bits);
    for (long k = 0; k <= n; ++k) {
        o.points.push_back(y);
        o.derivs.push_back(abs(deriv(y)));
        if (k < n) y = eval(y);
    }
    return o;
}

std::pair<Real, bool> QuadraticMap::log_deriv_sum(const Real& x, long n) const {
    Real sum(0.0, ctx_.bits);
    Real y = x.at_precision(ctx_.bits);
    for (long k = 0; k < n; ++k) {
        Real d = abs(deriv(y));
        if (d.is_zero()) return {sum, false};
        sum += log(d);
        y = eval(y);
    }
    return {sum, true};
}

Real QuadraticMap::deriv_product(const Real& x, long n) const {
    auto [sum, ok] = log_deriv_sum(x, n);
    if (!ok) return Real(0.0, ctx_.bits);
    return exp(sum);
}

std::pair<Real, Real> QuadraticMap::iterate_with_deriv(const Real& x, long n) const {
    Real y = x.at_precision(ctx_.bits);
    Real d(1.0, ctx_.bits);
    for (long k = 0; k < n; ++k) {
        d *= deriv(y);
        y = eval(y);
    }
    return {y, d};
}

Real conjugate_parameter(const Real& a) { return a * a - a; }

Real conjugate_parameter_inverse(const Real& atil) {
    return (sqrt(4.0 * atil + 1.0) + 1.0) * 0.5;
}

} // namespace nestlab
