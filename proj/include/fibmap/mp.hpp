#pragma once

#include <mpfr.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "fibmap/errors.hpp"

namespace fibmap::mp {

// Thin RAII wrapper over mpfr_t with per-value precision.  Arithmetic
// results take the larger operand precision and round to nearest;
// mul_exact() grows the result precision so the product is exact, which
// the chain-rule identity checks rely on.
class Real {
  public:
    explicit Real(mpfr_prec_t prec = 128) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }

    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, 64);
        mpfr_swap(v_, o.v_);
    }
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

    static Real of_long(long x, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_si(r.v_, x, MPFR_RNDN);
        return r;
    }
    static Real of_double(double x, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_d(r.v_, x, MPFR_RNDN);
        return r;
    }
    // Decimal string, rounded to `prec` bits.
    static Real of_string(const std::string& s, mpfr_prec_t prec) {
        Real r(prec);
        if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
            throw DomainError("mp::Real: cannot parse '" + s + "'");
        return r;
    }
    // 2^k, exact.
    static Real pow2(long k, mpfr_prec_t prec = 64) {
        Real r(prec);
        mpfr_set_ui_2exp(r.v_, 1, k, MPFR_RNDN);
        return r;
    }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

    // Rounds the current value into a new precision.
    Real rounded_to(mpfr_prec_t prec) const {
        Real r(prec);
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    int sign() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    // Exponent e with |x| in [2^(e-1), 2^e); only valid for nonzero x.
    mpfr_exp_t exp2() const { return mpfr_get_exp(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    // log2 |x| as a double, safe across the full exponent range.
    double log2_abs() const {
        if (is_zero()) return -1e300;
        long e = 0;
        double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
        return std::log2(std::fabs(m)) + static_cast<double>(e);
    }

    std::string str(int digits10 = 20) const {
        char* s = nullptr;
        if (mpfr_asprintf(&s, "%.*Rg", digits10, v_) < 0) return "<mpfr-error>";
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

    friend Real operator+(const Real& a, const Real& b) { return binop(a, b, mpfr_add); }
    friend Real operator-(const Real& a, const Real& b) { return binop(a, b, mpfr_sub); }
    friend Real operator*(const Real& a, const Real& b) { return binop(a, b, mpfr_mul); }
    friend Real operator/(const Real& a, const Real& b) { return binop(a, b, mpfr_div); }
    Real operator-() const {
        Real r(prec());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }

    Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }

    friend Real sqr(const Real& a) {
        Real r(a.prec());
        mpfr_sqr(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend Real abs(const Real& a) {
        Real r(a.prec());
        mpfr_abs(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend Real sqrt(const Real& a) {
        Real r(a.prec());
        mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend Real log(const Real& a) {
        Real r(a.prec());
        mpfr_log(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    // Exact product: result precision = sum of operand precisions.
    friend Real mul_exact(const Real& a, const Real& b) {
        Real r(a.prec() + b.prec());
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    // x * 2^k, exact at the same precision.
    friend Real ldexp2(const Real& a, long k) {
        Real r(a.prec());
        mpfr_mul_2si(r.v_, a.v_, k, MPFR_RNDN);
        return r;
    }

    friend int cmp(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_); }
    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_); }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_); }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_); }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_); }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_); }
    friend bool operator!=(const Real& a, const Real& b) { return !mpfr_equal_p(a.v_, b.v_); }

    friend bool bit_identical(const Real& a, const Real& b) {
        return mpfr_get_prec(a.v_) == mpfr_get_prec(b.v_) && mpfr_equal_p(a.v_, b.v_) &&
               (!mpfr_zero_p(a.v_) || mpfr_signbit(a.v_) == mpfr_signbit(b.v_));
    }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

  private:
    using mpfr_fn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
    static Real binop(const Real& a, const Real& b, mpfr_fn fn) {
        Real r(std::max(a.prec(), b.prec()));
        fn(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }

    mpfr_t v_;
};

// Count of agreeing leading decimal digits between two runs of the same
// computation.  0 if the signs differ or nothing agrees.
inline int agreeing_digits(const Real& lo_prec, const Real& hi_prec) {
    if (lo_prec.is_zero() && hi_prec.is_zero()) return 1000000000;
    if (lo_prec.sign() != hi_prec.sign()) return 0;
    Real diff = abs(lo_prec - hi_prec);
    if (diff.is_zero()) return 1000000000;
    double bits = hi_prec.log2_abs() - diff.log2_abs();
    if (bits <= 0) return 0;
    return static_cast<int>(bits * 0.30102999566398119521);
}

} // namespace fibmap::mp
