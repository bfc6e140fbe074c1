// Thin RAII wrapper over MPFR. Every value carries its own precision;
// binary operations compute at the larger of the two operand precisions.
#pragma once

#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

namespace nestlab {

class Real {
  public:
    static constexpr mpfr_prec_t kMinBits = 53;
    static constexpr mpfr_prec_t kMaxBits = 1 << 20;

    explicit Real(mpfr_prec_t prec = kMinBits) { mpfr_init2(v_, clamp(prec)); mpfr_set_zero(v_, 1); }
    Real(double d, mpfr_prec_t prec) { mpfr_init2(v_, clamp(prec)); mpfr_set_d(v_, d, MPFR_RNDN); }
    Real(long i, mpfr_prec_t prec) { mpfr_init2(v_, clamp(prec)); mpfr_set_si(v_, i, MPFR_RNDN); }
    Real(const std::string& dec, mpfr_prec_t prec) {
        mpfr_init2(v_, clamp(prec));
        mpfr_set_str(v_, dec.c_str(), 10, MPFR_RNDN);
    }

    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v_, kMinBits); mpfr_swap(v_, o.v_); }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    Real at_precision(mpfr_prec_t prec) const {
        Real r(prec);
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    // Decimal string with enough digits to round-trip at this precision.
    std::string str() const;
    std::string str(int digits) const;

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    Real operator-() const {
        Real r(precision());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }

#define NESTLAB_REAL_BINOP(op, fn)                                   \
    friend Real operator op(const Real& a, const Real& b) {          \
        Real r(maxprec(a, b));                                       \
        fn(r.v_, a.v_, b.v_, MPFR_RNDN);                             \
        return r;                                                    \
    }                                                                \
    friend Real operator op(const Real& a, double b) {               \
        Real r(a.precision());                                       \
        fn##_d(r.v_, a.v_, b, MPFR_RNDN);                            \
        return r;                                                    \
    }

    NESTLAB_REAL_BINOP(+, mpfr_add)
    NESTLAB_REAL_BINOP(-, mpfr_sub)
    NESTLAB_REAL_BINOP(*, mpfr_mul)
    NESTLAB_REAL_BINOP(/, mpfr_div)
#undef NESTLAB_REAL_BINOP

    friend Real operator+(double a, const Real& b) { return b + a; }
    friend Real operator*(double a, const Real& b) { return b * a; }
    friend Real operator-(double a, const Real& b) {
        Real r(b.precision());
        mpfr_d_sub(r.v_, a, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator/(double a, const Real& b) {
        Real r(b.precision());
        mpfr_d_div(r.v_, a, b.v_, MPFR_RNDN);
        return r;
    }

    Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator+=(double d) { mpfr_add_d(v_, v_, d, MPFR_RNDN); return *this; }
    Real& operator-=(double d) { mpfr_sub_d(v_, v_, d, MPFR_RNDN); return *this; }
    Real& operator*=(double d) { mpfr_mul_d(v_, v_, d, MPFR_RNDN); return *this; }
    Real& operator/=(double d) { mpfr_div_d(v_, v_, d, MPFR_RNDN); return *this; }

    friend int cmp(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_); }
    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_); }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_); }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_); }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_); }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_); }
    friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
    friend bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
    friend bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }
    friend bool operator<=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) <= 0; }
    friend bool operator>=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) >= 0; }

    friend Real abs(const Real& a) {
        Real r(a.precision());
        mpfr_abs(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend Real sqrt(const Real& a) {
        Real r(a.precision());
        mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend Real log(const Real& a) {
        Real r(a.precision());
        mpfr_log(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend Real exp(const Real& a) {
        Real r(a.precision());
        mpfr_exp(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend Real min(const Real& a, const Real& b) {
        Real r(maxprec(a, b));
        mpfr_min(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real max(const Real& a, const Real& b) {
        Real r(maxprec(a, b));
        mpfr_max(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }

  private:
    static mpfr_prec_t clamp(mpfr_prec_t p) {
        if (p < kMinBits) return kMinBits;
        if (p > kMaxBits) return kMaxBits;
        return p;
    }
    static mpfr_prec_t maxprec(const Real& a, const Real& b) {
        mpfr_prec_t pa = a.precision(), pb = b.precision();
        return pa > pb ? pa : pb;
    }

    mpfr_t v_;
};

} // namespace nestlab
