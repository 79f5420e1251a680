#pragma once

// The p-adic logarithm on principal units and the exponent D = (p^(fn))!
// that makes every Galois element of the degree-f unramified ring act
// trivially modulo p^n.

#include <gmpxx.h>

#include <optional>
#include <string>

#include "singmod/core/arith.hpp"
#include "singmod/core/errors.hpp"
#include "singmod/padic/number.hpp"

namespace singmod {

/// log(x) = sum (-1)^(k+1) (x-1)^k / k, summed until the remaining terms
/// vanish modulo the absolute precision of x - 1.
inline PadicNumber padic_log(PadicNumber const & x) {
    u64 const p = x.prime();
    PadicNumber const one = PadicNumber::one_like(x);
    PadicNumber const z = x - one;
    long const need = p == 2 ? 2 : 1;
    if (z.is_exact_zero()) return z;
    if (z.ord_lower_bound() < need) {
        throw domain_error("padic_log needs ord(x - 1) >= " + std::to_string(need));
    }
    if (z.is_unresolved_zero()) return z;
    long const v = z.valuation();
    long const a = z.absolute_precision();
    PadicNumber sum = PadicNumber::zero(x.ring());
    PadicNumber term = z;
    for (long k = 1;; ++k) {
        // k*v - floor(log_p k) bounds the valuation of every later term from
        // below and never decreases, so the first time it reaches a we stop.
        long log_k = 0;
        for (u64 t = static_cast<u64>(k); t >= p; t /= p) ++log_k;
        if (k * v - log_k >= a) break;
        PadicNumber const t = term / PadicNumber::from_integer(k, x.ring(), z.relative_precision());
        sum = (k % 2 == 1) ? sum + t : sum - t;
        term = term * z;
    }
    if (sum.is_unresolved_zero() && sum.absolute_precision() <= v) {
        throw precision_exhausted("precision too small to certify a digit of the logarithm");
    }
    return sum;
}

/// D = (p^(fn))!, kept symbolic when p^(fn) > 20.
struct ApproximationExponent {
    u64 p = 0;
    int f = 0;
    long n = 0;
    mpz_class q;                    // p^(fn); D = q!
    std::optional<mpz_class> value; // D itself when q <= 20

    /// Exponent of a prime ell in D (Legendre's formula).
    mpz_class legendre_exponent(u64 ell) const {
        mpz_class e = 0, t = q;
        while (t > 0) {
            t /= ell;
            e += t;
        }
        return e;
    }

    /// Whether m divides D.
    bool divisible_by(u64 m) const {
        if (m == 0) return false;
        if (q >= m) return true;
        for (auto const & [ell, e] : factorize(m)) {
            if (legendre_exponent(ell) < e) return false;
        }
        return true;
    }

    /// sigma^D = id on the degree-f ring, for every power sigma of Frobenius.
    bool frobenius_power_trivial() const { return divisible_by(static_cast<u64>(f)); }

    std::string to_string() const {
        if (value) return value->get_str();
        return "(" + q.get_str() + ")!";
    }
};

inline ApproximationExponent approximation_exponent(u64 p, int f, long n) {
    if (n < 1 || f < 1) throw domain_error("approximation_exponent needs n >= 1 and f >= 1");
    ApproximationExponent d;
    d.p = p;
    d.f = f;
    d.n = n;
    d.q = power(static_cast<long>(p), static_cast<unsigned long>(f * n));
    if (d.q <= 20) {
        mpz_class fact;
        mpz_fac_ui(fact.get_mpz_t(), d.q.get_ui());
        d.value = fact;
    }
    return d;
}

}  // namespace singmod
