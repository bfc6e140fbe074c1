// The quadratic family f_a(x) = a - 1 - a x^2 on I = [-1, 1], 1/2 <= a <= 2.
// Critical point 0, f(0) = a - 1, boundary maps into boundary.
#pragma once

#include <vector>

#include "nestlab/numerics.hpp"

namespace nestlab {

struct Orbit {
    std::vector<Real> points; // points[k] = f^k(x0)
    std::vector<Real> derivs; // derivs[k] = |Df(points[k])| = 2a|points[k]|
};

class QuadraticMap {
  public:
    QuadraticMap(const Real& a, PrecisionContext ctx);
    QuadraticMap(const std::string& a_dec, PrecisionContext ctx);
    QuadraticMap(double a, PrecisionContext ctx);

    const Real& a() const { return a_; }
    const PrecisionContext& ctx() const { return ctx_; }
    const Real& tol() const { return ctx_.tol; }
    mpfr_prec_t bits() const { return ctx_.bits; }

    // Same parameter re-read from its decimal form at a new precision.
    QuadraticMap with_context(PrecisionContext ctx) const;
    const std::string& a_decimal() const { return a_dec_; }

    Real eval(const Real& x) const;        // a - 1 - a x^2, DomainError if |x| > 1 + tol
    Real deriv(const Real& x) const { return -2.0 * (a_ * x); }
    Real iterate(const Real& x, long n) const;
    Orbit orbit(const Real& x0, long n) const;

    // |Df^n(x)| computed as exp(sum of logs); exact zero if the orbit hits 0.
    Real deriv_product(const Real& x, long n) const;
    // sum_{k<n} ln|Df(f^k(x))|; second member false if the orbit hit 0 exactly.
    std::pair<Real, bool> log_deriv_sum(const Real& x, long n) const;
    // (f^n(x), Df^n(x)) with the signed derivative tracked along the orbit.
    std::pair<Real, Real> iterate_with_deriv(const Real& x, long n) const;

  private:
    Real a_;
    PrecisionContext ctx_;
    std::string a_dec_;
    void validate() const;
};

// Parameter of the conjugate family x -> atil - x^2 (conjugacy y = a x).
Real conjugate_parameter(const Real& a);
// Inverse: the a in [1/2, 2] with a^2 - a = atil.
Real conjugate_parameter_inverse(const Real& atil);

} // namespace nestlab
