#pragma once

// Minimal RAII wrappers over MPFR: a real with its own precision and a
// complex number as a pair of reals. Every operation rounds to nearest at
// the precision of its result.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <climits>
#include <string>
#include <utility>

namespace singmod::mp {

class Real {
  public:
    explicit Real(mpfr_prec_t prec = 128) { mpfr_init2(x_, prec); mpfr_set_zero(x_, 1); }
    Real(mpfr_prec_t prec, long v) : Real(prec) { mpfr_set_si(x_, v, MPFR_RNDN); }
    Real(mpfr_prec_t prec, mpz_class const & v) : Real(prec) { mpfr_set_z(x_, v.get_mpz_t(), MPFR_RNDN); }
    Real(mpfr_prec_t prec, char const * s) : Real(prec) { mpfr_set_str(x_, s, 10, MPFR_RNDN); }
    Real(Real const & o) : Real(mpfr_get_prec(o.x_)) { mpfr_set(x_, o.x_, MPFR_RNDN); }
    Real(Real && o) noexcept : Real(2) { mpfr_swap(x_, o.x_); }
    Real & operator=(Real const & o) {
        if (this != &o) {
            mpfr_set_prec(x_, mpfr_get_prec(o.x_));
            mpfr_set(x_, o.x_, MPFR_RNDN);
        }
        return *this;
    }
    Real & operator=(Real && o) noexcept {
        mpfr_swap(x_, o.x_);
        return *this;
    }
    ~Real() { mpfr_clear(x_); }

    mpfr_ptr get() { return x_; }
    mpfr_srcptr get() const { return x_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(x_); }

    static Real pi(mpfr_prec_t prec) {
        Real r(prec);
        mpfr_const_pi(r.x_, MPFR_RNDN);
        return r;
    }

    friend Real operator+(Real const & a, Real const & b) { return op(mpfr_add, a, b); }
    friend Real operator-(Real const & a, Real const & b) { return op(mpfr_sub, a, b); }
    friend Real operator*(Real const & a, Real const & b) { return op(mpfr_mul, a, b); }
    friend Real operator/(Real const & a, Real const & b) { return op(mpfr_div, a, b); }
    Real operator-() const {
        Real r(prec());
        mpfr_neg(r.x_, x_, MPFR_RNDN);
        return r;
    }

    Real sqrt() const { return unary(mpfr_sqrt); }
    Real exp() const { return unary(mpfr_exp); }
    Real cos() const { return unary(mpfr_cos); }
    Real sin() const { return unary(mpfr_sin); }
    Real abs() const { return unary(mpfr_abs); }

    double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }
    long log2_magnitude() const { return mpfr_zero_p(x_) ? LONG_MIN : mpfr_get_exp(x_); }
    bool is_zero() const { return mpfr_zero_p(x_) != 0; }

    /// Nearest integer and the distance to it.
    std::pair<mpz_class, Real> round() const {
        Real r(prec());
        mpfr_rint(r.x_, x_, MPFR_RNDN);
        mpz_class z;
        mpfr_get_z(z.get_mpz_t(), r.x_, MPFR_RNDN);
        return {z, (*this - r).abs()};
    }

    friend bool operator<(Real const & a, Real const & b) { return mpfr_less_p(a.x_, b.x_) != 0; }

  private:
    template <typename F>
    static Real op(F f, Real const & a, Real const & b) {
        Real r(std::max(a.prec(), b.prec()));
        f(r.x_, a.x_, b.x_, MPFR_RNDN);
        return r;
    }
    template <typename F>
    Real unary(F f) const {
        Real r(prec());
        f(r.x_, x_, MPFR_RNDN);
        return r;
    }

    mpfr_t x_;
};

struct Complex {
    Real re, im;

    explicit Complex(mpfr_prec_t prec = 128) : re(prec), im(prec) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    mpfr_prec_t prec() const { return re.prec(); }

    friend Complex operator+(Complex const & a, Complex const & b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(Complex const & a, Complex const & b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator*(Complex const & a, Complex const & b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator/(Complex const & a, Complex const & b) {
        Real const den = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
    }
    Complex scaled(long k) const {
        Real const s(prec(), k);
        return {re * s, im * s};
    }

    Real norm() const { return (re * re + im * im).sqrt(); }

    /// exp(2 pi i tau).
    static Complex q_of(Complex const & tau) {
        mpfr_prec_t const prec = tau.prec();
        Real const two_pi = Real::pi(prec) * Real(prec, 2);
        Real const mod = (-(two_pi * tau.im)).exp();
        Real const arg = two_pi * tau.re;
        return {mod * arg.cos(), mod * arg.sin()};
    }
};

}  // namespace singmod::mp
