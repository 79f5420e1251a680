#pragma once

// The valuation bound ord_p Phi_N(x1, x2) <= 6 Psi(N)/(p - 1) for ordinary
// singular moduli x1, x2, with apparent exceptions (values that vanish to
// the working precision) settled by the integer resultant
//   R = Res_X(H1(X), Res_Y(Phi_N(X, Y), H2(Y))) = prod Phi_N(a_i, b_j),
// which is zero iff Phi_N vanishes at some pair of roots of H1 and H2.

#include <gmpxx.h>

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "singmod/cm/singular_moduli.hpp"
#include "singmod/modular/modpoly.hpp"
#include "singmod/padic/finite_field.hpp"

namespace singmod {

namespace detail {

inline u64 resultant_mod(ff::FpPoly a, ff::FpPoly b, u64 l) {
    ff::trim(a);
    ff::trim(b);
    if (a.empty() || b.empty()) return 0;
    u64 acc = 1;
    for (;;) {
        int const da = ff::degree(a), db = ff::degree(b);
        if (db == 0) return mulmod(acc, powmod(b[0], static_cast<u64>(da), l), l);
        if (da == 0) return mulmod(acc, powmod(a[0], static_cast<u64>(db), l), l);
        // res(a, b) = (-1)^(da db) res(b, a) = (-1)^(da db) lc(b)^(da - dr) res(b, a mod b).
        ff::FpPoly r = ff::mod(a, b, l);
        if (r.empty()) return 0;
        int const dr = ff::degree(r);
        if ((static_cast<long>(da) * db) % 2 == 1) acc = (l - acc) % l;
        acc = mulmod(acc, powmod(b.back(), static_cast<u64>(da - dr), l), l);
        a = std::move(b);
        b = std::move(r);
    }
}

inline ff::FpPoly reduce_mod(IntegerPolynomial const & f, u64 l) {
    ff::FpPoly out;
    for (auto const & c : f.coefficients()) out.push_back(mod_reduce(c, l));
    ff::trim(out);
    return out;
}

// Interpolates the polynomial of degree < xs.size() through (xs[i], ys[i]).
inline ff::FpPoly interpolate_mod(std::vector<u64> const & xs, std::vector<u64> const & ys, u64 l) {
    std::size_t const n = xs.size();
    std::vector<u64> dd = ys;  // Newton divided differences
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t i = n - 1; i >= k; --i) {
            u64 const num = (dd[i] + l - dd[i - 1]) % l;
            u64 const den = (xs[i] + l - xs[i - k]) % l;
            dd[i] = mulmod(num, invmod(den, l), l);
        }
    }
    ff::FpPoly poly{dd[n - 1]};
    for (std::size_t k = n - 1; k-- > 0;) {
        // poly = poly * (X - xs[k]) + dd[k]
        ff::FpPoly next(poly.size() + 1, 0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] = (next[i + 1] + poly[i]) % l;
            next[i] = (next[i] + l - mulmod(poly[i], xs[k], l)) % l;
        }
        next[0] = (next[0] + dd[k]) % l;
        poly = std::move(next);
    }
    ff::trim(poly);
    return poly;
}

inline double log2_abs(mpz_class const & z) {
    if (z == 0) return 0;
    long e;
    double const m = mpz_get_d_2exp(&e, z.get_mpz_t());
    return std::log2(std::fabs(m)) + static_cast<double>(e);
}

}  // namespace detail

struct ResultantCertificate {
    bool zero = false;
    int primes_used = 0;
    double log2_bound = 0;  // log2 of the bound on |R|
};

/// Decides R = 0 by reduction modulo primes below 2^61 until their product
/// exceeds twice the bound |R| <= L1(Phi)^(h1 h2) M(H1)^(Psi h2) M(H2)^(Psi h1),
/// with the Mahler measures bounded by Euclidean norms.
inline ResultantCertificate phi_resultant_certificate(IntegerPolynomial const & h1, IntegerPolynomial const & h2,
                                                      ModularPolynomial const & phi) {
    if (!h1.is_monic() || !h2.is_monic()) throw domain_error("class polynomials must be monic");
    int const psi_n = phi.degree_y();
    long const deg1 = h1.degree(), deg2 = h2.degree();
    auto l2 = [](IntegerPolynomial const & f) {
        mpz_class s = 0;
        for (auto const & c : f.coefficients()) s += c * c;
        return detail::log2_abs(s) / 2;
    };
    ResultantCertificate cert;
    cert.log2_bound = static_cast<double>(deg1 * deg2) * detail::log2_abs(phi.l1_norm()) +
                      psi_n * (static_cast<double>(deg2) * l2(h1) + static_cast<double>(deg1) * l2(h2));
    double const needed = cert.log2_bound + 2;
    double covered = 0;
    long const points = static_cast<long>(psi_n) * deg2 + 1;
    for (u64 l = (u64{1} << 61) - 1; covered < needed; l -= 2) {
        if (!is_prime(l)) continue;
        ++cert.primes_used;
        covered += std::log2(static_cast<double>(l));
        ff::FpPoly const a = detail::reduce_mod(h1, l);
        ff::FpPoly const b = detail::reduce_mod(h2, l);
        std::vector<u64> xs, ys;
        for (long t = 0; t < points; ++t) {
            u64 const x = static_cast<u64>(t);
            xs.push_back(x);
            ff::FpPoly py;
            for (int j = 0; j < phi.size(); ++j) {
                u64 v = 0;
                for (int i = phi.size() - 1; i >= 0; --i) {
                    v = (mulmod(v, x, l) + mod_reduce(phi.coeff(i, j), l)) % l;
                }
                py.push_back(v);
            }
            ys.push_back(detail::resultant_mod(py, b, l));
        }
        ff::FpPoly const s = detail::interpolate_mod(xs, ys, l);
        if (detail::resultant_mod(a, s, l) != 0) {
            cert.zero = false;
            return cert;
        }
    }
    cert.zero = true;
    return cert;
}

/// Memoized certificates keyed by (d1, d2, N); safe to share across threads.
class ResultantCertifier {
  public:
    ResultantCertificate get(long long d1, IntegerPolynomial const & h1, long long d2, IntegerPolynomial const & h2,
                             int level) {
        auto const key = std::make_tuple(std::min(d1, d2), std::max(d1, d2), level);
        {
            std::lock_guard lock(m_);
            auto const it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        ResultantCertificate const c = phi_resultant_certificate(h1, h2, modular_poly(level));
        std::lock_guard lock(m_);
        cache_.emplace(key, c);
        return c;
    }

  private:
    std::mutex m_;
    std::map<std::tuple<long long, long long, int>, ResultantCertificate> cache_;
};

/// An ordinary singular modulus: a root of H_d in an unramified ring.
struct CmPoint {
    long long d = 0;
    IntegerPolynomial hcp;
    PadicNumber value;
};

struct RigidityReport {
    long long d1 = 0, d2 = 0;
    int level = 1;
    u64 p = 0;
    mpq_class threshold;
    std::optional<long> ord;  // ord_p Phi_N(x1, x2) when decided
    long ord_lower_bound = 0;
    bool certified_zero = false;
    bool pass = false;
    std::string note;
};

inline RigidityReport rigidity_threshold_check(CmPoint const & x1, CmPoint const & x2, int level, u64 p,
                                               ResultantCertifier & certifier) {
    for (auto const * x : {&x1, &x2}) {
        if (reduction_type(x->d, p) != ReductionType::ordinary) {
            throw domain_error("rigidity check needs ordinary reduction; d = " + std::to_string(x->d) + " is supersingular at " +
                               std::to_string(p));
        }
        if (x->value.prime() != p) throw domain_error("point lives over a different prime");
        if (x->value.ord_lower_bound() < 0) throw domain_error("singular moduli must be integral");
    }
    RigidityReport r;
    r.d1 = x1.d;
    r.d2 = x2.d;
    r.level = level;
    r.p = p;
    r.threshold = mpq_class(6 * static_cast<long>(psi(static_cast<u64>(level))), static_cast<long>(p - 1));
    r.threshold.canonicalize();
    PadicNumber const v = modular_poly(level).eval(x1.value, x2.value);
    if (!v.is_zero()) {
        r.ord = v.valuation();
        r.ord_lower_bound = *r.ord;
        r.pass = mpq_class(*r.ord) <= r.threshold;
        if (!r.pass) r.note = "valuation above the threshold";
        return r;
    }
    r.ord_lower_bound = v.is_exact_zero() ? LONG_MAX : v.absolute_precision();
    if (mpq_class(r.ord_lower_bound) <= r.threshold) {
        throw precision_exhausted("Phi_N(x1, x2) vanishes only to precision " + std::to_string(r.ord_lower_bound));
    }
    ResultantCertificate const cert = certifier.get(x1.d, x1.hcp, x2.d, x2.hcp, level);
    if (!cert.zero) {
        throw precision_exhausted("Phi_N(x1, x2) vanishes to precision " + std::to_string(r.ord_lower_bound) +
                                  " but the resultant is nonzero");
    }
    r.certified_zero = true;
    r.pass = true;
    r.note = "exact zero certified by resultant (" + std::to_string(cert.primes_used) + " primes)";
    return r;
}

}  // namespace singmod
