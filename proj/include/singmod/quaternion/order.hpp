#pragma once

// The definite quaternion algebra Q = K + K u over K = Q(sqrt(-3)) with
// u^2 = -7p and u a = conj(a) u, and its maximal order
//   O = { [a, b] : a in D^-1, b in q^-1 D^-1, a - 7b in O_K },
// D = sqrt(-3) O_K the different and q = (2 + sqrt(-3)) O_K.
//
// Elements of K are u + v theta, theta = (1 + sqrt(-3))/2, theta^2 = theta - 1.
// With s = sqrt(-3) = 2 theta - 1 the ideal conditions become integrality of
// explicit coordinates:
//   a in D^-1        <=>  s a       = (-u - 2v) + (2u + v) theta   in O_K
//   b in q^-1 D^-1   <=>  (2 + s) s b = (-5u - 4v) + (4u - v) theta in O_K
// since (2 + s) s = 4 theta - 5.

#include <gmpxx.h>

#include <array>
#include <optional>
#include <string>

#include "singmod/core/arith.hpp"
#include "singmod/core/rng.hpp"

namespace singmod {

inline bool is_integer(mpq_class const & q) { return q.get_den() == 1; }

struct EisensteinNumber {
    mpq_class u = 0, v = 0;  // u + v theta

    EisensteinNumber() = default;
    EisensteinNumber(mpq_class u_, mpq_class v_) : u(std::move(u_)), v(std::move(v_)) {
        u.canonicalize();
        v.canonicalize();
    }
    EisensteinNumber(long n) : u(n), v(0) {}  // NOLINT(google-explicit-constructor)

    static EisensteinNumber theta() { return {0, 1}; }
    static EisensteinNumber sqrt_minus_3() { return {-1, 2}; }

    EisensteinNumber conj() const { return {u + v, -v}; }  // theta -> 1 - theta
    mpq_class trace() const { return 2 * u + v; }
    mpq_class norm() const { return u * u + u * v + v * v; }
    bool is_zero() const { return u == 0 && v == 0; }
    bool is_integral() const { return is_integer(u) && is_integer(v); }

    EisensteinNumber operator-() const { return {-u, -v}; }
    friend EisensteinNumber operator+(EisensteinNumber const & a, EisensteinNumber const & b) { return {a.u + b.u, a.v + b.v}; }
    friend EisensteinNumber operator-(EisensteinNumber const & a, EisensteinNumber const & b) { return {a.u - b.u, a.v - b.v}; }
    friend EisensteinNumber operator*(EisensteinNumber const & a, EisensteinNumber const & b) {
        // (u + v t)(u' + v' t) = uu' - vv' + (uv' + vu' + vv') t
        return {a.u * b.u - a.v * b.v, a.u * b.v + a.v * b.u + a.v * b.v};
    }
    friend EisensteinNumber operator*(mpq_class const & q, EisensteinNumber const & a) { return {q * a.u, q * a.v}; }
    friend EisensteinNumber operator/(EisensteinNumber const & a, EisensteinNumber const & b) {
        if (b.is_zero()) throw domain_error("division by zero in K");
        mpq_class const n = b.norm();
        EisensteinNumber const t = a * b.conj();
        return {t.u / n, t.v / n};
    }
    friend bool operator==(EisensteinNumber const & a, EisensteinNumber const & b) { return a.u == b.u && a.v == b.v; }
    friend bool operator!=(EisensteinNumber const & a, EisensteinNumber const & b) { return !(a == b); }

    std::string to_string() const { return "(" + singmod::to_string(u) + ") + (" + singmod::to_string(v) + ")*theta"; }
};

inline bool in_inverse_different(EisensteinNumber const & a) {
    return is_integer(-a.u - 2 * a.v) && is_integer(2 * a.u + a.v);
}

inline bool in_inverse_q_different(EisensteinNumber const & b) {
    return is_integer(-5 * b.u - 4 * b.v) && is_integer(4 * b.u - b.v);
}

struct QuaternionElement {
    EisensteinNumber alpha, beta;  // [alpha, beta] = alpha + beta u
    u64 p = 0;

    QuaternionElement() = default;
    QuaternionElement(EisensteinNumber a, EisensteinNumber b, u64 p_) : alpha(std::move(a)), beta(std::move(b)), p(p_) {}

    static QuaternionElement scalar(EisensteinNumber a, u64 p) { return {std::move(a), 0, p}; }
    static QuaternionElement u_element(u64 p) { return {0, 1, p}; }

    mpq_class reduced_trace() const { return alpha.trace(); }
    mpq_class reduced_norm() const { return alpha.norm() + mpq_class(7 * static_cast<long>(p)) * beta.norm(); }
    /// [conj(alpha), -beta], so that x * conjugate() = N(x).
    QuaternionElement conjugate() const { return {alpha.conj(), -beta, p}; }

    /// The 2x2 matrix [[alpha, beta], [-7p conj(beta), conj(alpha)]] over K.
    std::array<EisensteinNumber, 4> to_matrix() const {
        return {alpha, beta, mpq_class(-7 * static_cast<long>(p)) * beta.conj(), alpha.conj()};
    }

    bool is_zero() const { return alpha.is_zero() && beta.is_zero(); }

    friend QuaternionElement operator+(QuaternionElement const & x, QuaternionElement const & y) {
        check_same(x, y);
        return {x.alpha + y.alpha, x.beta + y.beta, x.p};
    }
    friend QuaternionElement operator-(QuaternionElement const & x, QuaternionElement const & y) {
        check_same(x, y);
        return {x.alpha - y.alpha, x.beta - y.beta, x.p};
    }
    friend QuaternionElement operator*(mpq_class const & q, QuaternionElement const & x) { return {q * x.alpha, q * x.beta, x.p}; }
    friend QuaternionElement operator*(QuaternionElement const & x, QuaternionElement const & y) {
        check_same(x, y);
        mpq_class const sevenp(7 * static_cast<long>(x.p));
        return {x.alpha * y.alpha - sevenp * (x.beta * y.beta.conj()), x.alpha * y.beta + x.beta * y.alpha.conj(), x.p};
    }
    friend bool operator==(QuaternionElement const & x, QuaternionElement const & y) {
        return x.p == y.p && x.alpha == y.alpha && x.beta == y.beta;
    }

    std::string to_string() const { return "[" + alpha.to_string() + ", " + beta.to_string() + "]"; }

  private:
    static void check_same(QuaternionElement const & x, QuaternionElement const & y) {
        if (x.p != y.p) throw domain_error("quaternion elements over different primes");
    }
};

inline QuaternionElement quat_multiply(QuaternionElement const & x, QuaternionElement const & y) { return x * y; }

inline bool order_contains(QuaternionElement const & x) {
    return in_inverse_different(x.alpha) && in_inverse_q_different(x.beta) && (x.alpha - mpq_class(7) * x.beta).is_integral();
}

inline void check_order_prime(u64 p) {
    if (p < 5 || !is_prime(p) || p % 3 != 2) throw domain_error("the order needs an odd prime p = 2 mod 3");
}

inline std::array<QuaternionElement, 4> order_basis(u64 p) {
    check_order_prime(p);
    EisensteinNumber const t = EisensteinNumber::theta();
    EisensteinNumber const one(1);
    return {QuaternionElement{one - mpq_class(2) * t, 0, p}, QuaternionElement{one - t, 0, p},
            QuaternionElement{EisensteinNumber(mpq_class(1, 3), mpq_class(-2, 3)), EisensteinNumber(mpq_class(4, 21), mpq_class(-5, 21)), p},
            QuaternionElement{one - t, EisensteinNumber(mpq_class(3, 21), mpq_class(-9, 21)), p}};
}

using RationalMatrix4 = std::array<std::array<mpq_class, 4>, 4>;

inline mpq_class determinant(RationalMatrix4 m) {
    mpq_class det = 1;
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        while (piv < 4 && m[piv][c] == 0) ++piv;
        if (piv == 4) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (int r = c + 1; r < 4; ++r) {
            mpq_class const f = m[r][c] / m[c][c];
            for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

struct GramMatrix {
    RationalMatrix4 entries;
    mpq_class det;
};

/// tr(b_i b_j) for the basis b_1..b_4.
inline GramMatrix gram_matrix(u64 p) {
    auto const b = order_basis(p);
    GramMatrix g;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) g.entries[i][j] = (b[i] * b[j]).reduced_trace();
    }
    g.det = determinant(g.entries);
    return g;
}

/// Rational coordinates of x in the basis b_1..b_4 (alpha and beta give four
/// linear equations in the coordinates).
inline std::array<mpq_class, 4> basis_coordinates(QuaternionElement const & x) {
    auto const b = order_basis(x.p);
    RationalMatrix4 m;
    std::array<mpq_class, 4> rhs{x.alpha.u, x.alpha.v, x.beta.u, x.beta.v};
    for (int j = 0; j < 4; ++j) {
        m[0][j] = b[j].alpha.u;
        m[1][j] = b[j].alpha.v;
        m[2][j] = b[j].beta.u;
        m[3][j] = b[j].beta.v;
    }
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        while (m[piv][c] == 0) ++piv;
        std::swap(m[piv], m[c]);
        std::swap(rhs[piv], rhs[c]);
        for (int r = 0; r < 4; ++r) {
            if (r == c || m[r][c] == 0) continue;
            mpq_class const f = m[r][c] / m[c][c];
            for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
            rhs[r] -= f * rhs[c];
        }
    }
    for (int c = 0; c < 4; ++c) rhs[c] /= m[c][c];
    return rhs;
}

/// x = a + p^n w with a in O_K and w in O, when such a decomposition exists.
/// Writing x = [alpha, beta] the choice a = alpha - 7 beta is forced modulo
/// p^n O_K, and then w = [7 beta / p^n, beta / p^n].
struct OkPlusPnDecomposition {
    EisensteinNumber ok_part;
    QuaternionElement order_part;
};

inline std::optional<OkPlusPnDecomposition> decompose_ok_plus_pn_order(QuaternionElement const & x, long n) {
    if (n < 0) throw domain_error("n must be non-negative");
    EisensteinNumber const a = x.alpha - mpq_class(7) * x.beta;
    if (!a.is_integral()) return std::nullopt;
    mpq_class const pn(power(static_cast<long>(x.p), static_cast<unsigned long>(n)));
    EisensteinNumber const b = mpq_class(1 / pn) * x.beta;
    QuaternionElement const w{mpq_class(7) * b, b, x.p};
    if (!order_contains(w)) return std::nullopt;
    return OkPlusPnDecomposition{a, w};
}

struct PhiCertificate {
    QuaternionElement phi;
    long n = 0;
    long x = 0;
    u64 p = 0;
    mpz_class d;               // 3x^2 + 4p^(2n+1)
    OkPlusPnDecomposition decomposition;
    bool decomposition_ok = false;   // phi = a + p^n w with a in O_K, w in O
    bool quadratic_ok = false;       // phi^2 - phi + (1 + d)/4 = 0
};

/// phi = [1/2 - (2 theta - 1) x / 2, (3 - 2 theta) p^n / 7].
inline PhiCertificate construct_phi(long n, long x, u64 p) {
    check_order_prime(p);
    if (n < 0) throw domain_error("construct_phi needs n >= 0");
    if (x % 2 == 0) throw domain_error("construct_phi needs odd x");
    PhiCertificate c;
    c.n = n;
    c.x = x;
    c.p = p;
    mpz_class const pn = power(static_cast<long>(p), static_cast<unsigned long>(n));
    c.d = 3 * mpz_class(x) * x + 4 * pn * pn * static_cast<long>(p);
    EisensteinNumber const t = EisensteinNumber::theta();
    EisensteinNumber const alpha = EisensteinNumber(mpq_class(1, 2), 0) - mpq_class(x, 2) * (mpq_class(2) * t - EisensteinNumber(1));
    EisensteinNumber const beta = mpq_class(pn, 7) * (EisensteinNumber(3) - mpq_class(2) * t);
    c.phi = QuaternionElement{alpha, beta, p};
    auto const dec = decompose_ok_plus_pn_order(c.phi, n);
    if (dec) {
        c.decomposition = *dec;
        c.decomposition_ok =
            c.phi == QuaternionElement::scalar(dec->ok_part, p) + mpq_class(pn) * dec->order_part && dec->ok_part.is_integral() &&
            order_contains(dec->order_part);
    }
    mpq_class q(1 + c.d, 4);
    q.canonicalize();
    c.quadratic_ok = (c.phi * c.phi - c.phi + QuaternionElement::scalar(EisensteinNumber(q, 0), p)).is_zero();
    return c;
}

/// Random element with coordinates of denominator dividing den.
inline QuaternionElement random_quaternion(Rng & rng, u64 p, long den, long bound) {
    auto r = [&] {
        mpq_class x(rng.uniform(-bound, bound), den);
        x.canonicalize();
        return x;
    };
    return {EisensteinNumber(r(), r()), EisensteinNumber(r(), r()), p};
}

}  // namespace singmod
