#pragma once

// Minimal RAII wrapper over MPFR reals. Only what the tail integrals of the
// basis evaluation need: +,-,*,/, exp, sqrt, comparisons, pi. Precision is
// carried per value; binary ops compute at the wider operand precision.

#include "fil/rational.hpp"

#include <mpfr.h>

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace fil {

class MpReal {
public:
    explicit MpReal(mpfr_prec_t prec = 128) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    MpReal(double d, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, d, MPFR_RNDN); }
    MpReal(long n, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, n, MPFR_RNDN); }
    MpReal(const Rational& q, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }

    MpReal(const MpReal& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    MpReal(MpReal&& o) noexcept { mpfr_init2(v_, 2); mpfr_swap(v_, o.v_); }
    MpReal& operator=(const MpReal& o) {
        if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
        return *this;
    }
    MpReal& operator=(MpReal&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~MpReal() { mpfr_clear(v_); }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_negative() const { return mpfr_sgn(v_) < 0; }
    bool is_zero() const { return mpfr_zero_p(v_); }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    friend MpReal operator+(const MpReal& a, const MpReal& b) { MpReal r(wider(a, b)); mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend MpReal operator-(const MpReal& a, const MpReal& b) { MpReal r(wider(a, b)); mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend MpReal operator*(const MpReal& a, const MpReal& b) { MpReal r(wider(a, b)); mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend MpReal operator/(const MpReal& a, const MpReal& b) { MpReal r(wider(a, b)); mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    MpReal operator-() const { MpReal r(prec()); mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

    MpReal& operator+=(const MpReal& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    MpReal& operator-=(const MpReal& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    MpReal& operator*=(const MpReal& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    MpReal& operator/=(const MpReal& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

    friend MpReal operator*(const MpReal& a, double b) { MpReal r(a.prec()); mpfr_mul_d(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend MpReal operator*(const MpReal& a, long b) { MpReal r(a.prec()); mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend MpReal operator/(const MpReal& a, long b) { MpReal r(a.prec()); mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend MpReal operator+(const MpReal& a, double b) { MpReal r(a.prec()); mpfr_add_d(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend MpReal operator-(const MpReal& a, double b) { MpReal r(a.prec()); mpfr_sub_d(r.v_, a.v_, b, MPFR_RNDN); return r; }

    friend bool operator<(const MpReal& a, const MpReal& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const MpReal& a, const MpReal& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator<(const MpReal& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
    friend bool operator>(const MpReal& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }

    friend MpReal exp(const MpReal& a) { MpReal r(a.prec()); mpfr_exp(r.v_, a.v_, MPFR_RNDN); return r; }
    friend MpReal expm1(const MpReal& a) { MpReal r(a.prec()); mpfr_expm1(r.v_, a.v_, MPFR_RNDN); return r; }
    friend MpReal sqrt(const MpReal& a) { MpReal r(a.prec()); mpfr_sqrt(r.v_, a.v_, MPFR_RNDN); return r; }
    friend MpReal abs(const MpReal& a) { MpReal r(a.prec()); mpfr_abs(r.v_, a.v_, MPFR_RNDN); return r; }
    friend MpReal log(const MpReal& a) { MpReal r(a.prec()); mpfr_log(r.v_, a.v_, MPFR_RNDN); return r; }
    friend MpReal cos(const MpReal& a) { MpReal r(a.prec()); mpfr_cos(r.v_, a.v_, MPFR_RNDN); return r; }
    friend MpReal sin(const MpReal& a) { MpReal r(a.prec()); mpfr_sin(r.v_, a.v_, MPFR_RNDN); return r; }
    friend MpReal pow_si(const MpReal& a, long e) { MpReal r(a.prec()); mpfr_pow_si(r.v_, a.v_, e, MPFR_RNDN); return r; }

    static MpReal pi(mpfr_prec_t prec) { MpReal r(prec); mpfr_const_pi(r.v_, MPFR_RNDN); return r; }

private:
    static mpfr_prec_t wider(const MpReal& a, const MpReal& b) {
        return std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_));
    }
    mpfr_t v_;
};

// Gauss-Legendre nodes/weights on [-1,1] at the precision of `prec` bits,
// by Newton iteration on the Legendre recurrence.
void gauss_legendre_mp(int npts, mpfr_prec_t prec, std::vector<MpReal>& nodes, std::vector<MpReal>& weights);

// Double-precision convenience (computed at 128 bits, rounded).
void gauss_legendre(int npts, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace fil
