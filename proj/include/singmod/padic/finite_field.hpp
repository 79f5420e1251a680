#pragma once

// Arithmetic in F_p[t], in F_q = F_p[t]/(C), and in F_q[Y], with
// Cantor-Zassenhaus root extraction. Residue-field workhorse for the
// unramified rings and the root search.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "singmod/core/arith.hpp"
#include "singmod/core/errors.hpp"

namespace singmod::ff {

/// Polynomial over F_p, coefficients low to high, no trailing zeros.
using FpPoly = std::vector<u64>;

inline void trim(FpPoly & a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(FpPoly const & a) { return static_cast<int>(a.size()) - 1; }

inline FpPoly sub(FpPoly a, FpPoly const & b, u64 p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
    trim(a);
    return a;
}

inline FpPoly mul(FpPoly const & a, FpPoly const & b, u64 p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
    }
    trim(r);
    return r;
}

/// Remainder of a modulo a nonzero b.
inline FpPoly mod(FpPoly a, FpPoly const & b, u64 p, FpPoly * quotient = nullptr) {
    if (b.empty()) throw domain_error("FpPoly division by zero");
    u64 const inv = invmod(b.back(), p);
    int const db = degree(b);
    if (quotient) quotient->assign(std::max(0, degree(a) - db + 1), 0);
    for (int i = degree(a); i >= db; --i) {
        u64 const c = mulmod(a[i], inv, p);
        if (c == 0) continue;
        if (quotient) (*quotient)[i - db] = c;
        for (int j = 0; j <= db; ++j) a[i - db + j] = (a[i - db + j] + p - mulmod(c, b[j], p)) % p;
    }
    trim(a);
    if (quotient) trim(*quotient);
    return a;
}

inline FpPoly monic(FpPoly a, u64 p) {
    if (a.empty()) return a;
    u64 const inv = invmod(a.back(), p);
    for (auto & c : a) c = mulmod(c, inv, p);
    return a;
}

inline FpPoly gcd(FpPoly a, FpPoly b, u64 p) {
    while (!b.empty()) {
        FpPoly r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a, p);
}

/// Inverse of a modulo m via the extended Euclidean algorithm.
inline FpPoly inverse_mod(FpPoly const & a, FpPoly const & m, u64 p) {
    FpPoly r0 = m, r1 = mod(a, m, p);
    FpPoly s0 = {}, s1 = {1};
    while (!r1.empty()) {
        FpPoly q;
        FpPoly r2 = mod(r0, r1, p, &q);
        FpPoly s2 = sub(s0, mul(q, s1, p), p);
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (degree(r0) != 0) throw domain_error("FpPoly not invertible");
    u64 const inv = invmod(r0[0], p);
    for (auto & c : s0) c = mulmod(c, inv, p);
    return s0;
}

inline FpPoly powmod(FpPoly base, mpz_class const & e, FpPoly const & m, u64 p) {
    FpPoly r = mod(FpPoly{1}, m, p);
    base = mod(base, m, p);
    for (long i = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; i >= 0; --i) {
        r = mod(mul(r, r, p), m, p);
        if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) r = mod(mul(r, base, p), m, p);
    }
    return r;
}

/// Rabin's irreducibility test for a monic polynomial of degree f.
inline bool is_irreducible(FpPoly const & c, u64 p) {
    int const f = degree(c);
    if (f < 1) return false;
    if (f == 1) return true;
    FpPoly const x = {0, 1};
    auto frob_power = [&](int k) {
        FpPoly r = x;
        for (int i = 0; i < k; ++i) r = powmod(r, mpz_class(p), c, p);
        return r;
    };
    if (frob_power(f) != mod(x, c, p)) return false;
    for (auto const & [q, e] : factorize(static_cast<u64>(f))) {
        FpPoly const g = gcd(c, sub(frob_power(f / static_cast<int>(q)), x, p), p);
        if (degree(g) != 0) return false;
    }
    return true;
}

/// First monic irreducible of degree f in the order obtained by reading the
/// low coefficients as base-p digits of 0, 1, 2, ...
inline FpPoly first_irreducible(u64 p, int f) {
    mpz_class const count = power(static_cast<long>(p), static_cast<unsigned long>(f));
    for (mpz_class k = 0; k < count; ++k) {
        FpPoly c(f + 1, 0);
        c[f] = 1;
        mpz_class t = k;
        for (int i = 0; i < f; ++i) {
            c[i] = mod_reduce(t, p);
            t /= p;
        }
        if (is_irreducible(c, p)) return c;
    }
    throw error("no irreducible polynomial found");
}

/// The field F_p[t]/(C). Elements are coefficient vectors of length f.
class FiniteField {
  public:
    using Elem = std::vector<u64>;

    FiniteField(u64 p, FpPoly modulus) : p_(p), modulus_(std::move(modulus)) {
        order_ = power(static_cast<long>(p_), static_cast<unsigned long>(degree()));
    }

    u64 prime() const { return p_; }
    int degree() const { return ff::degree(modulus_); }
    FpPoly const & modulus() const { return modulus_; }
    mpz_class const & order() const { return order_; }

    Elem zero() const { return Elem(degree(), 0); }
    Elem one() const { return constant(1); }
    Elem constant(u64 c) const {
        Elem e = zero();
        e[0] = c % p_;
        return e;
    }
    Elem generator() const {
        if (degree() == 1) return constant(p_ - modulus_[0] % p_);
        Elem e = zero();
        e[1] = 1;
        return e;
    }

    bool is_zero(Elem const & a) const {
        return std::all_of(a.begin(), a.end(), [](u64 c) { return c == 0; });
    }

    Elem add(Elem const & a, Elem const & b) const {
        Elem r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = (a[i] + b[i]) % p_;
        return r;
    }
    Elem sub(Elem const & a, Elem const & b) const {
        Elem r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = (a[i] + p_ - b[i]) % p_;
        return r;
    }
    Elem neg(Elem const & a) const { return sub(zero(), a); }
    Elem mul(Elem const & a, Elem const & b) const { return from_poly(ff::mul(to_poly(a), to_poly(b), p_)); }
    Elem inv(Elem const & a) const {
        if (is_zero(a)) throw domain_error("inverse of zero in finite field");
        return from_poly(inverse_mod(to_poly(a), modulus_, p_));
    }
    Elem pow(Elem const & a, mpz_class const & e) const {
        return from_poly(powmod(to_poly(a), e, modulus_, p_));
    }
    Elem frobenius(Elem const & a) const { return pow(a, mpz_class(p_)); }

    /// Degree over F_p of the smallest subfield containing a.
    int element_degree(Elem const & a) const {
        Elem x = a;
        for (int k = 1; k <= degree(); ++k) {
            x = frobenius(x);
            if (x == a) return k;
        }
        return degree();
    }

    FpPoly to_poly(Elem const & a) const {
        FpPoly r(a.begin(), a.end());
        trim(r);
        return r;
    }
    Elem from_poly(FpPoly const & a) const {
        FpPoly const r = ff::mod(a, modulus_, p_);
        Elem e = zero();
        std::copy(r.begin(), r.end(), e.begin());
        return e;
    }

  private:
    u64 p_;
    FpPoly modulus_;
    mpz_class order_;
};

/// Polynomials over a finite field, low to high, trimmed.
class FqPolyRing {
  public:
    using Elem = FiniteField::Elem;
    using Poly = std::vector<Elem>;

    explicit FqPolyRing(FiniteField const & field) : k_(field) {}

    FiniteField const & field() const { return k_; }

    void trim(Poly & a) const {
        while (!a.empty() && k_.is_zero(a.back())) a.pop_back();
    }
    static int degree(Poly const & a) { return static_cast<int>(a.size()) - 1; }

    Poly sub(Poly a, Poly const & b) const {
        if (a.size() < b.size()) a.resize(b.size(), k_.zero());
        for (std::size_t i = 0; i < b.size(); ++i) a[i] = k_.sub(a[i], b[i]);
        trim(a);
        return a;
    }

    Poly mul(Poly const & a, Poly const & b) const {
        if (a.empty() || b.empty()) return {};
        Poly r(a.size() + b.size() - 1, k_.zero());
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (k_.is_zero(a[i])) continue;
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = k_.add(r[i + j], k_.mul(a[i], b[j]));
        }
        trim(r);
        return r;
    }

    Poly mod(Poly a, Poly const & b, Poly * quotient = nullptr) const {
        if (b.empty()) throw domain_error("FqPoly division by zero");
        Elem const inv = k_.inv(b.back());
        int const db = degree(b);
        if (quotient) quotient->assign(std::max(0, degree(a) - db + 1), k_.zero());
        for (int i = degree(a); i >= db; --i) {
            if (k_.is_zero(a[i])) continue;
            Elem const c = k_.mul(a[i], inv);
            if (quotient) (*quotient)[i - db] = c;
            for (int j = 0; j <= db; ++j) a[i - db + j] = k_.sub(a[i - db + j], k_.mul(c, b[j]));
        }
        trim(a);
        if (quotient) trim(*quotient);
        return a;
    }

    Poly monic(Poly a) const {
        if (a.empty()) return a;
        Elem const inv = k_.inv(a.back());
        for (auto & c : a) c = k_.mul(c, inv);
        return a;
    }

    Poly gcd(Poly a, Poly b) const {
        while (!b.empty()) {
            Poly r = mod(a, b);
            a = std::move(b);
            b = std::move(r);
        }
        return monic(a);
    }

    Poly powmod(Poly base, mpz_class const & e, Poly const & m) const {
        Poly r = mod(Poly{k_.one()}, m);
        base = mod(base, m);
        for (long i = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; i >= 0; --i) {
            r = mod(mul(r, r), m);
            if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) r = mod(mul(r, base), m);
        }
        return r;
    }

    Elem eval(Poly const & a, Elem const & x) const {
        Elem r = k_.zero();
        for (auto it = a.rbegin(); it != a.rend(); ++it) r = k_.add(k_.mul(r, x), *it);
        return r;
    }

    Poly derivative(Poly const & a) const {
        Poly r;
        for (std::size_t i = 1; i < a.size(); ++i) r.push_back(k_.mul(k_.constant(i % k_.prime()), a[i]));
        trim(r);
        return r;
    }

    /// Distinct roots in F_q, sorted lexicographically by coordinates.
    std::vector<Elem> roots(Poly f) const {
        trim(f);
        std::vector<Elem> out;
        if (degree(f) < 1) return out;
        f = monic(f);
        Poly const y = {k_.zero(), k_.one()};
        Poly const split = gcd(f, sub(powmod(y, k_.order(), f), y));
        split_linear(split, out, 1);
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    // Equal-degree splitting of a product of distinct linear factors.
    void split_linear(Poly const & g, std::vector<Elem> & out, u64 salt) const {
        int const n = degree(g);
        if (n < 1) return;
        if (n == 1) {
            out.push_back(k_.neg(k_.mul(g[0], k_.inv(g[1]))));
            return;
        }
        for (u64 attempt = salt;; ++attempt) {
            Elem const delta = pseudo_element(attempt);
            Poly h;
            if (k_.prime() == 2) {
                // Trace map T(delta*Y) = sum of (delta*Y)^(2^i), i < log2 q.
                Poly const base = mod(Poly{k_.zero(), delta}, g);
                Poly term = base, acc = base;
                long const bits = static_cast<long>(mpz_sizeinbase(k_.order().get_mpz_t(), 2)) - 1;
                for (long i = 1; i < bits; ++i) {
                    term = mod(mul(term, term), g);
                    acc = add(acc, term);
                }
                h = gcd(g, acc);
            } else {
                mpz_class const e = (k_.order() - 1) / 2;
                Poly const t = powmod(Poly{delta, k_.one()}, e, g);
                h = gcd(g, sub(t, Poly{k_.one()}));
            }
            if (degree(h) >= 1 && degree(h) < n) {
                Poly q;
                mod(g, h, &q);
                split_linear(h, out, attempt + 1);
                split_linear(monic(q), out, attempt + 1);
                return;
            }
        }
    }

    Poly add(Poly a, Poly const & b) const {
        if (a.size() < b.size()) a.resize(b.size(), k_.zero());
        for (std::size_t i = 0; i < b.size(); ++i) a[i] = k_.add(a[i], b[i]);
        trim(a);
        return a;
    }

    // Deterministic sequence of field elements used as splitting shifts.
    Elem pseudo_element(u64 k) const {
        Elem e = k_.zero();
        u64 state = k * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL;
        for (auto & c : e) {
            state ^= state >> 29;
            state *= 0xbf58476d1ce4e5b9ULL;
            state ^= state >> 32;
            c = state % k_.prime();
        }
        if (k_.is_zero(e)) e[0] = 1;
        return e;
    }

    FiniteField const & k_;
};

}  // namespace singmod::ff
