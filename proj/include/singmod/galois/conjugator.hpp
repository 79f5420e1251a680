#pragma once

// Valuations of gamma^D - 1 for principal units and the explicit diagonal
// conjugator: given A_1..A_n in GL_2(Q_p), alpha, beta and e such that
// B_i = A_i^{-1} diag(p^-e alpha^D, p^-e beta^D) A_i are integral, not all
// divisible by p, and k0 <= ord(p^-2e alpha^D beta^D) <= 3 D k0.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <climits>
#include <optional>
#include <string>
#include <vector>

#include "singmod/core/arith.hpp"
#include "singmod/core/errors.hpp"
#include "singmod/core/rng.hpp"
#include "singmod/padic/number.hpp"

namespace singmod {

struct LogOrderRecord {
    u64 p = 0;
    long D = 0;
    long lhs = 0;  // ord(gamma^D - 1)
    long rhs = 0;  // ord(D) + ord(gamma - 1), or ord(D) + ord(gamma^2 - 1) - 1 for p = 2
    bool holds = false;
};

/// Checks ord(gamma^D - 1) = ord(D) + ord(gamma - 1) for p >= 3 and
/// ord(gamma^D - 1) <= ord(D) + ord(gamma^2 - 1) - 1 for p = 2.
inline LogOrderRecord log_order_predicate(PadicNumber const & gamma, long D) {
    if (D < 1) throw domain_error("log_order_predicate needs D >= 1");
    if (gamma.degree() != 1) throw domain_error("log_order_predicate works over Q_p");
    u64 const p = gamma.prime();
    PadicNumber const one = PadicNumber::one_like(gamma);
    PadicNumber const g1 = gamma - one;
    if (g1.ord_lower_bound() < 1) throw domain_error("gamma must lie in 1 + pZ_p");
    auto decided = [](PadicNumber const & x, char const * what) {
        if (x.is_zero()) throw precision_exhausted(std::string("cannot resolve ord of ") + what);
        return x.valuation();
    };
    LogOrderRecord r;
    r.p = p;
    r.D = D;
    r.lhs = decided(gamma.pow(D) - one, "gamma^D - 1");
    long const od = valuation(static_cast<u64>(D), p);
    if (p == 2) {
        r.rhs = od + decided(gamma * gamma - one, "gamma^2 - 1") - 1;
        r.holds = r.lhs <= r.rhs;
    } else {
        r.rhs = od + decided(g1, "gamma - 1");
        r.holds = r.lhs == r.rhs;
    }
    return r;
}

/// ord_p(gamma^D - 1) for gamma = 1 + p^m, m >= 1, in closed form. For p
/// odd this is the equality above; for p = 2 the refinement
/// ord(gamma^D - 1) = ord(gamma - 1) + ord(gamma + 1) + ord(D) - 1 (D even)
/// and = ord(gamma - 1) (D odd).
inline mpz_class ord_unit_power_minus_one(u64 p, long m, mpz_class const & D) {
    if (m < 1 || D < 1) throw domain_error("ord_unit_power_minus_one needs m >= 1 and D >= 1");
    long const od = valuation(D, p);
    if (p != 2) return mpz_class(m + od);
    if (od == 0) return mpz_class(m);
    long const ord_plus = m == 1 ? 2 : 1;  // 2 + 2^m
    return mpz_class(m + ord_plus + od - 1);
}

/// 2x2 matrix over Q_p.
struct MatrixGL2 {
    std::array<PadicNumber, 4> e;  // a, b, c, d

    PadicNumber const & a() const { return e[0]; }
    PadicNumber const & b() const { return e[1]; }
    PadicNumber const & c() const { return e[2]; }
    PadicNumber const & d() const { return e[3]; }
    PadicNumber det() const { return a() * d() - b() * c(); }

    static MatrixGL2 from_integers(long a, long b, long c, long d, u64 p, long prec) {
        return {{PadicNumber::from_integer(a, p, prec), PadicNumber::from_integer(b, p, prec),
                 PadicNumber::from_integer(c, p, prec), PadicNumber::from_integer(d, p, prec)}};
    }
    static MatrixGL2 from_integers(mpz_class const & a, mpz_class const & b, mpz_class const & c, mpz_class const & d,
                                   u64 p, long prec) {
        return {{PadicNumber::from_integer(a, p, prec), PadicNumber::from_integer(b, p, prec),
                 PadicNumber::from_integer(c, p, prec), PadicNumber::from_integer(d, p, prec)}};
    }

    /// Smallest entry valuation; LONG_MAX for the zero matrix.
    long min_ord() const {
        long m = LONG_MAX;
        for (auto const & x : e) {
            if (!x.is_exact_zero()) m = std::min(m, x.ord_lower_bound());
        }
        return m;
    }
    bool is_integral() const { return min_ord() >= 0; }
    /// Some entry is a unit.
    bool not_in_p_m2() const {
        for (auto const & x : e) {
            if (!x.is_zero() && x.valuation() == 0) return true;
        }
        return false;
    }

    std::string to_string() const {
        return "[[" + a().to_string() + ", " + b().to_string() + "], [" + c().to_string() + ", " + d().to_string() + "]]";
    }
};

namespace detail {

inline std::optional<long> ord_of_product(PadicNumber const & x, PadicNumber const & y) {
    if (x.is_exact_zero() || y.is_exact_zero()) return std::nullopt;
    if (x.is_zero() || y.is_zero()) throw precision_exhausted("matrix entry indistinguishable from zero");
    return x.valuation() + y.valuation();
}

}  // namespace detail

/// k = ord(det A) - min{ord(ad), ord(bd), ord(ac)}; unchanged by scaling A.
inline long compute_k_i(MatrixGL2 const & A) {
    PadicNumber const delta = A.det();
    if (delta.is_zero()) throw domain_error("matrix is singular at the stored precision");
    std::optional<long> m;
    for (auto const & v : {detail::ord_of_product(A.a(), A.d()), detail::ord_of_product(A.b(), A.d()),
                           detail::ord_of_product(A.a(), A.c())}) {
        if (v) m = m ? std::min(*m, *v) : *v;
    }
    if (!m) throw domain_error("degenerate matrix: ad, bd and ac all vanish");
    return delta.valuation() - *m;
}

struct ConjugatorResult {
    u64 p = 0;
    long k0 = 0;
    long D = 0;
    int case_tag = 1;  // 1: k <= k0, 2: k > k0
    std::vector<long> k_i;
    long k = 0;
    mpz_class alpha, beta;  // both are integers for the explicit choices
    mpz_class e;
    mpz_class ord_alpha_beta;  // ord(p^-2e alpha^D beta^D)
    std::vector<MatrixGL2> B;

    bool all_integral() const {
        return std::all_of(B.begin(), B.end(), [](MatrixGL2 const & m) { return m.is_integral(); });
    }
    bool some_not_in_p_m2() const {
        return std::any_of(B.begin(), B.end(), [](MatrixGL2 const & m) { return m.not_in_p_m2(); });
    }
    bool bounds_hold() const { return k0 <= ord_alpha_beta && ord_alpha_beta <= 3 * mpz_class(D) * k0; }
    /// e <= D k0 - k0/2 (case 2), written as 2e <= 2 D k0 - k0.
    bool e_bound_holds() const { return case_tag == 1 || (e >= 0 && 2 * e <= 2 * mpz_class(D) * k0 - k0); }
};

/// Requires k0 >= 2 ord_p(2D). Case 1 takes alpha = 1, beta = p^k0,
/// e = -max(0, k); case 2 takes alpha = p^k0 + p^k, beta = p^k0 and
/// e = ord(alpha^D - beta^D) - k with the valuation from the closed form
/// for gamma = alpha/beta = 1 + p^(k - k0).
inline ConjugatorResult construct_conjugator(std::vector<MatrixGL2> const & As, long k0, long D) {
    if (As.empty()) throw domain_error("construct_conjugator needs at least one matrix");
    if (D < 1 || k0 < 1) throw domain_error("construct_conjugator needs D >= 1 and k0 >= 1");
    u64 const p = As[0].a().prime();
    if (k0 < 2 * valuation(static_cast<u64>(2 * D), p)) throw domain_error("k0 must be at least 2 ord_p(2D)");
    ConjugatorResult r;
    r.p = p;
    r.k0 = k0;
    r.D = D;
    for (auto const & A : As) r.k_i.push_back(compute_k_i(A));
    r.k = *std::max_element(r.k_i.begin(), r.k_i.end());
    mpz_class const pk0 = power(static_cast<long>(p), static_cast<unsigned long>(k0));
    mpz_class ord_diff;  // ord(alpha^D - beta^D)
    if (r.k <= k0) {
        r.case_tag = 1;
        r.alpha = 1;
        r.beta = pk0;
        r.e = -std::max(0L, r.k);
        r.ord_alpha_beta = -2 * r.e + mpz_class(D) * k0;
    } else {
        r.case_tag = 2;
        r.alpha = pk0 + power(static_cast<long>(p), static_cast<unsigned long>(r.k));
        r.beta = pk0;
        ord_diff = mpz_class(D) * k0 + ord_unit_power_minus_one(p, r.k - k0, D);
        r.e = ord_diff - r.k;
        r.ord_alpha_beta = -2 * r.e + 2 * mpz_class(D) * k0;
    }
    if (!r.e.fits_slong_p()) throw resource_error("e does not fit a machine integer");
    long const e = r.e.get_si();
    // Working precision: enough relative digits to carry alpha^D - beta^D
    // and the entries of the A_i through the division by p^e delta.
    long spread = 0;
    for (auto const & A : As) {
        long const lo = A.min_ord();
        long hi = 0;
        for (auto const & x : A.e) {
            if (!x.is_exact_zero()) hi = std::max(hi, x.ord_lower_bound());
        }
        spread = std::max(spread, hi - lo + A.det().valuation());
    }
    long const prec = 64 + 2 * (std::abs(e) + D * (k0 + std::max(0L, r.k)) + spread);
    PadicNumber const aD = PadicNumber::from_integer(r.alpha, p, prec).pow(D);
    PadicNumber const bD = PadicNumber::from_integer(r.beta, p, prec).pow(D);
    PadicNumber const diff = aD - bD;
    if (r.case_tag == 2) {
        if (diff.is_zero() || diff.valuation() != ord_diff) {
            throw error("alpha^D - beta^D disagrees with its closed-form valuation");
        }
    }
    PadicNumber const pe = e >= 0 ? PadicNumber::from_integer(power(static_cast<long>(p), static_cast<unsigned long>(e)), p, prec)
                                  : PadicNumber::from_integer(1, p, prec) /
                                        PadicNumber::from_integer(power(static_cast<long>(p), static_cast<unsigned long>(-e)), p, prec);
    for (auto const & A : As) {
        PadicNumber const delta = A.det();
        PadicNumber const scale = pe * delta;
        PadicNumber const ad = A.a() * A.d();
        MatrixGL2 B{{(ad * diff + delta * bD) / scale, (A.b() * A.d() * diff) / scale, -(A.a() * A.c() * diff) / scale,
                     (delta * aD - ad * diff) / scale}};
        r.B.push_back(B);
    }
    return r;
}

/// Random integer matrix for property checks. Half the draws have entries
/// u p^v with v <= 4 (occasionally zero); the other half are
/// P diag(p^s, p^t) Q with unimodular P, Q, whose determinants carry large
/// valuations and so exercise k > k0. Singular and degenerate draws are
/// rejected.
inline MatrixGL2 random_gl2_matrix(Rng & rng, u64 p, long prec) {
    auto const pl = static_cast<long>(p);
    for (;;) {
        std::array<mpz_class, 4> m;
        if (rng.coin()) {
            for (auto & x : m) {
                if (rng.uniform(0, 9) == 0) {
                    x = 0;
                    continue;
                }
                long u;
                do {
                    u = rng.uniform(1, 9999);
                } while (u % pl == 0);
                x = mpz_class(rng.coin() ? u : -u) * power(pl, static_cast<unsigned long>(rng.uniform(0, 4)));
            }
        } else {
            auto unimodular = [&] {
                std::array<mpz_class, 4> u{1, 0, 0, 1};
                for (int step = 0; step < 3; ++step) {
                    long const t = rng.uniform(-9, 9);
                    if (rng.coin()) {
                        u = {u[0] + t * u[2], u[1] + t * u[3], u[2], u[3]};
                    } else {
                        u = {u[0], u[1], u[2] + t * u[0], u[3] + t * u[1]};
                    }
                }
                return u;
            };
            auto const P = unimodular(), Q = unimodular();
            mpz_class const s = power(pl, static_cast<unsigned long>(rng.uniform(0, 3)));
            mpz_class const t = power(pl, static_cast<unsigned long>(rng.uniform(0, 12)));
            // P diag(s, t) Q
            std::array<mpz_class, 4> const PD{P[0] * s, P[1] * t, P[2] * s, P[3] * t};
            m = {PD[0] * Q[0] + PD[1] * Q[2], PD[0] * Q[1] + PD[1] * Q[3], PD[2] * Q[0] + PD[3] * Q[2],
                 PD[2] * Q[1] + PD[3] * Q[3]};
        }
        if (m[0] * m[3] - m[1] * m[2] == 0) continue;
        if ((m[0] == 0 || m[3] == 0) && (m[1] == 0 || m[3] == 0) && (m[0] == 0 || m[2] == 0)) continue;
        return MatrixGL2::from_integers(m[0], m[1], m[2], m[3], p, prec);
    }
}

}  // namespace singmod
