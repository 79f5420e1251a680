#pragma once

// Square-free values of f(x) = 3x^2 + 4p^(2n+1).
//
// N(y) counts x >= 1 with f(x) <= y and f(x) square-free. It is computed
// twice: by factoring every value, and by the Moebius sum
//   N(y) = sum_{d <= sqrt(y)} mu(d) A_{d^2}(y),
// where A_{d^2}(y) counts the x in range lying over a root of f mod d^2.
// rho(m) is the number of roots of f mod m. The density
//   c(p, n) = prod_l (1 - rho(l^2)/l^2)
// is enclosed in a fixed-point interval with outward rounding.

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "singmod/core/arith.hpp"
#include "singmod/core/parallel.hpp"

namespace singmod {

struct SieveConfig {
    u64 p = 5;
    long n = 1;
    u64 y_cap = 100'000'000;
    u64 x_cap = 1'000'000;
    unsigned threads = 1;
};

namespace detail {

inline void check_sieve_config(SieveConfig const & cfg) {
    if (cfg.p < 5 || !is_prime(cfg.p)) throw domain_error("the sieve needs a prime p >= 5");
    if (cfg.n < 1) throw domain_error("the sieve needs n >= 1");
}

inline u64 checked_mul(u64 a, u64 b) {
    u128 const r = static_cast<u128>(a) * b;
    if (r >> 62) throw resource_error("value of f does not fit a machine word");
    return static_cast<u64>(r);
}

/// f(x) mod m.
inline u64 f_mod(SieveConfig const & cfg, u64 x, u64 m) {
    u64 const c = mulmod(4 % m, powmod(cfg.p, static_cast<u64>(2 * cfg.n + 1), m), m);
    return (mulmod(3 % m, mulmod(x % m, x % m, m), m) + c) % m;
}

}  // namespace detail

/// The constant term 4p^(2n+1).
inline u64 sieve_constant(SieveConfig const & cfg) {
    detail::check_sieve_config(cfg);
    u64 c = 4;
    for (long i = 0; i < 2 * cfg.n + 1; ++i) c = detail::checked_mul(c, cfg.p);
    return c;
}

inline u64 sieve_f(SieveConfig const & cfg, u64 x) {
    return detail::checked_mul(3, detail::checked_mul(x, x)) + sieve_constant(cfg);
}

/// Largest x with f(x) <= y, or 0 if none.
inline u64 sieve_x_max(SieveConfig const & cfg, u64 y) {
    u64 const c = sieve_constant(cfg);
    if (y < c + 3) return 0;
    return isqrt((y - c) / 3);
}

/// Roots of f modulo l^e, sorted. For l outside {2, 3, p} the two square
/// roots mod l are lifted by Newton iteration; for l in {2, p} the roots
/// mod l^(k+1) are found among the lifts r + t l^k of the roots mod l^k.
inline std::vector<u64> roots_mod_prime_power(SieveConfig const & cfg, u64 l, int e) {
    detail::check_sieve_config(cfg);
    if (e < 1) throw domain_error("exponent must be positive");
    u64 m = 1;
    for (int i = 0; i < e; ++i) m = detail::checked_mul(m, l);
    std::vector<u64> roots;
    if (l == 3) return roots;  // f = 4p^(2n+1) != 0 mod 3
    if (l == 2 || l == cfg.p) {
        std::vector<u64> level{0};
        u64 mk = 1;
        for (int k = 0; k < e; ++k) {
            std::vector<u64> next;
            for (u64 r : level) {
                for (u64 t = 0; t < l; ++t) {
                    u64 const x = r + t * mk;
                    if (detail::f_mod(cfg, x, mk * l) == 0) next.push_back(x);
                }
            }
            level = std::move(next);
            mk *= l;
            if (level.empty()) break;
        }
        roots = std::move(level);
    } else {
        // x^2 = -c / 3 mod l with c = 4p^(2n+1) prime to l.
        u64 const c = detail::f_mod(cfg, 0, l);
        u64 const a = mulmod(l - c, invmod(3, l), l);
        if (powmod(a, (l - 1) / 2, l) != 1) return roots;
        u64 const s = sqrt_mod_prime(a, l);
        for (u64 x : {s, l - s}) {
            for (int it = 0; it < e + 1 && detail::f_mod(cfg, x, m) != 0; ++it) {
                u64 const fx = detail::f_mod(cfg, x, m);
                u64 const dfx = mulmod(6 % m, x % m, m);
                x = (x + m - mulmod(fx, invmod(dfx, m), m)) % m;
            }
            if (detail::f_mod(cfg, x, m) != 0) throw error("Newton lifting failed to converge");
            roots.push_back(x);
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

/// rho(m) through its prime-power factorisation.
inline u64 rho(u64 m, SieveConfig const & cfg) {
    if (m == 0) throw domain_error("rho needs m >= 1");
    u64 r = 1;
    for (auto const & [l, e] : factorize(m)) {
        r *= roots_mod_prime_power(cfg, l, e).size();
        if (r == 0) break;
    }
    return r;
}

/// rho(m) by testing every residue.
inline u64 rho_brute(u64 m, SieveConfig const & cfg) {
    if (m == 0) throw domain_error("rho needs m >= 1");
    u64 r = 0;
    for (u64 b = 0; b < m; ++b) r += detail::f_mod(cfg, b, m) == 0;
    return r;
}

enum class CountMethod { brute, mobius };

namespace detail {

inline void check_y(SieveConfig const & cfg, u64 y) {
    if (y > cfg.y_cap) throw resource_error("y = " + std::to_string(y) + " exceeds the cap " + std::to_string(cfg.y_cap));
}

/// Square-freeness by trial division; primes must cover sqrt(v).
inline bool squarefree_by_trial(u64 v, std::vector<u64> const & primes) {
    for (u64 l : primes) {
        if (l * l > v) break;
        if (v % l == 0) {
            v /= l;
            if (v % l == 0) return false;
        }
    }
    return true;
}

inline u64 count_brute(SieveConfig const & cfg, u64 y) {
    u64 const X = sieve_x_max(cfg, y);
    if (X == 0) return 0;
    std::vector<u64> const primes = primes_up_to(isqrt(y) + 1);
    std::size_t const chunks = std::max<std::size_t>(1, std::min<u64>(X, 64));
    std::vector<u64> partial(chunks, 0);
    parallel_for(
        chunks,
        [&](std::size_t c) {
            u64 const lo = 1 + X * c / chunks, hi = X * (c + 1) / chunks;
            for (u64 x = lo; x <= hi; ++x) partial[c] += squarefree_by_trial(sieve_f(cfg, x), primes);
        },
        cfg.threads);
    u64 total = 0;
    for (u64 v : partial) total += v;
    return total;
}

/// Moebius function on [0, n] by a linear sieve.
inline std::vector<signed char> mobius_table(u64 n) {
    std::vector<signed char> mu(n + 1, 1);
    std::vector<u64> primes;
    std::vector<bool> composite(n + 1, false);
    mu[0] = 0;
    for (u64 i = 2; i <= n; ++i) {
        if (!composite[i]) {
            primes.push_back(i);
            mu[i] = -1;
        }
        for (u64 l : primes) {
            if (i * l > n) break;
            composite[i * l] = true;
            if (i % l == 0) {
                mu[i * l] = 0;
                break;
            }
            mu[i * l] = static_cast<signed char>(-mu[i]);
        }
    }
    return mu;
}

/// A_{d^2}(y) for square-free d from the roots of f mod l^2, l | d, joined
/// by the Chinese remainder theorem.
class RootCounter {
  public:
    RootCounter(SieveConfig cfg, u64 X) : cfg_(std::move(cfg)), X_(X) {}

    u64 count(u64 d) {
        std::vector<u64> residues{0};
        u64 modulus = 1;
        for (auto const & [l, e] : factorize(d)) {
            std::vector<u64> const & rl = roots_l2(l);
            if (rl.empty()) return 0;
            u64 const m2 = l * l;
            // x = r mod modulus, x = s mod m2.
            u64 const inv = invmod(modulus % m2, m2);
            std::vector<u64> next;
            next.reserve(residues.size() * rl.size());
            for (u64 r : residues) {
                for (u64 s : rl) {
                    u64 const t = mulmod((s + m2 - r % m2) % m2, inv, m2);
                    next.push_back(r + modulus * t);
                }
            }
            residues = std::move(next);
            modulus *= m2;
        }
        u64 total = 0;
        for (u64 a : residues) {
            if (a == 0) {
                total += X_ / modulus;
            } else if (a <= X_) {
                total += (X_ - a) / modulus + 1;
            }
        }
        return total;
    }

  private:
    std::vector<u64> const & roots_l2(u64 l) {
        std::lock_guard lock(m_);
        auto it = cache_.find(l);
        if (it == cache_.end()) it = cache_.emplace(l, roots_mod_prime_power(cfg_, l, 2)).first;
        return it->second;
    }

    SieveConfig cfg_;
    u64 X_;
    std::mutex m_;
    std::map<u64, std::vector<u64>> cache_;
};

inline u64 count_mobius(SieveConfig const & cfg, u64 y) {
    u64 const X = sieve_x_max(cfg, y);
    if (X == 0) return 0;
    u64 const D = isqrt(y);
    auto const mu = mobius_table(D);
    RootCounter counter(cfg, X);
    std::size_t const chunks = std::max<std::size_t>(1, std::min<u64>(D, 64));
    std::vector<i64> partial(chunks, 0);
    parallel_for(
        chunks,
        [&](std::size_t c) {
            u64 const lo = 1 + D * c / chunks, hi = D * (c + 1) / chunks;
            for (u64 d = lo; d <= hi; ++d) {
                if (mu[d] == 0) continue;
                partial[c] += mu[d] * static_cast<i64>(counter.count(d));
            }
        },
        cfg.threads);
    i64 total = 0;
    for (i64 v : partial) total += v;
    if (total < 0) throw error("Moebius sum is negative");
    return static_cast<u64>(total);
}

}  // namespace detail

inline u64 count_N(u64 y, SieveConfig const & cfg, CountMethod method) {
    detail::check_sieve_config(cfg);
    detail::check_y(cfg, y);
    return method == CountMethod::brute ? detail::count_brute(cfg, y) : detail::count_mobius(cfg, y);
}

/// Fixed-point enclosure [lo, hi] / 2^bits.
struct DensityInterval {
    u64 L = 0;
    long bits = 0;
    mpz_class lo, hi;

    bool above(mpq_class const & t) const {
        // lo / 2^bits > t
        return mpq_class(lo) > t * mpq_class(power(2, static_cast<unsigned long>(bits)));
    }
    bool below_or_equal(mpq_class const & t) const { return mpq_class(hi) <= t * mpq_class(power(2, static_cast<unsigned long>(bits))); }
    bool contains(DensityInterval const & o) const {
        return bits == o.bits && lo <= o.lo && o.hi <= hi;
    }
    /// Decimal rendering rounded outward.
    std::string lo_decimal(int digits = 30) const { return render(lo, digits, false); }
    std::string hi_decimal(int digits = 30) const { return render(hi, digits, true); }

  private:
    std::string render(mpz_class const & v, int digits, bool up) const {
        mpz_class const scale = power(10, static_cast<unsigned long>(digits));
        mpz_class const den = power(2, static_cast<unsigned long>(bits));
        mpz_class q;
        if (up) {
            mpz_cdiv_q(q.get_mpz_t(), mpz_class(v * scale).get_mpz_t(), den.get_mpz_t());
        } else {
            mpz_fdiv_q(q.get_mpz_t(), mpz_class(v * scale).get_mpz_t(), den.get_mpz_t());
        }
        std::string s = q.get_str();
        if (s.size() <= static_cast<std::size_t>(digits)) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
        s.insert(s.size() - static_cast<std::size_t>(digits), ".");
        return s;
    }
};

namespace detail {

inline mpz_class mul_floor(mpz_class const & a, mpz_class const & b, long bits) {
    mpz_class r = a * b;
    mpz_fdiv_q_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
    return r;
}

inline mpz_class mul_ceil(mpz_class const & a, mpz_class const & b, long bits) {
    mpz_class r = a * b;
    mpz_cdiv_q_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
    return r;
}

inline mpz_class frac_floor(mpz_class const & num, mpz_class const & den, long bits) {
    mpz_class r = num << static_cast<mp_bitcnt_t>(bits);
    mpz_fdiv_q(r.get_mpz_t(), r.get_mpz_t(), den.get_mpz_t());
    return r;
}

inline mpz_class frac_ceil(mpz_class const & num, mpz_class const & den, long bits) {
    mpz_class r = num << static_cast<mp_bitcnt_t>(bits);
    mpz_cdiv_q(r.get_mpz_t(), r.get_mpz_t(), den.get_mpz_t());
    return r;
}

}  // namespace detail

/// Encloses c(p, n). The product runs over primes l <= L together with p;
/// for the remaining primes rho(l^2) <= 2, and their product lies in
/// [1 - 2/(L - 1), 1].
inline DensityInterval euler_product_c(SieveConfig const & cfg, u64 L, long bits = 192) {
    detail::check_sieve_config(cfg);
    if (L < 100) throw domain_error("euler_product_c needs L >= 100");
    DensityInterval r;
    r.L = L;
    r.bits = bits;
    r.lo = r.hi = power(2, static_cast<unsigned long>(bits));
    std::vector<u64> primes = primes_up_to(L);
    if (cfg.p > L) primes.push_back(cfg.p);
    for (u64 l : primes) {
        u64 const rl = roots_mod_prime_power(cfg, l, 2).size();
        if (rl == 0) continue;
        mpz_class const l2 = mpz_class(static_cast<unsigned long>(l)) * static_cast<unsigned long>(l);
        mpz_class const num = l2 - static_cast<unsigned long>(rl);
        r.lo = detail::mul_floor(r.lo, detail::frac_floor(num, l2, bits), bits);
        r.hi = detail::mul_ceil(r.hi, detail::frac_ceil(num, l2, bits), bits);
    }
    mpz_class const tail = detail::frac_floor(mpz_class(static_cast<unsigned long>(L - 3)), mpz_class(static_cast<unsigned long>(L - 1)), bits);
    r.lo = detail::mul_floor(r.lo, tail, bits);
    return r;
}

/// Asserts c(p, n) > 1/7 from the enclosure; throws when the interval
/// straddles 1/7.
inline bool density_exceeds_one_seventh(DensityInterval const & c) {
    mpq_class const seventh(1, 7);
    if (c.above(seventh)) return true;
    if (c.below_or_equal(seventh)) return false;
    throw inconclusive("c(p, n) interval straddles 1/7 at L = " + std::to_string(c.L));
}

/// Upper bound for (2/5) prod_{l <= L} (1 - l^(-3/2)), in the same fixed
/// point as euler_product_c, using sqrt(l) <= S / 2^bits with
/// S = isqrt(l 4^bits) + 1.
inline mpz_class two_fifths_product_upper(u64 L, long bits = 192) {
    mpz_class const one = power(2, static_cast<unsigned long>(bits));
    mpz_class hi = detail::frac_ceil(2, 5, bits);
    for (u64 l : primes_up_to(L)) {
        mpz_class S = mpz_class(static_cast<unsigned long>(l)) << static_cast<mp_bitcnt_t>(2 * bits);
        mpz_sqrt(S.get_mpz_t(), S.get_mpz_t());
        S += 1;
        // l^(-3/2) >= 2^bits / (l S); the factor is at most 1 - that.
        mpz_class const lower = detail::frac_floor(1, mpz_class(static_cast<unsigned long>(l)) * S, 2 * bits);
        hi = detail::mul_ceil(hi, one - lower, bits);
    }
    return hi;
}

struct AdmissibleX {
    u64 x = 0;
    u64 f = 0;
    std::vector<std::pair<u64, int>> factorization;
    bool coprime_to_p = false;
    bool odd = false;
    bool prime_to_3 = false;
};

/// Least x >= 1 with f(x) square-free, with its certificate.
inline AdmissibleX minimal_admissible_x(SieveConfig const & cfg) {
    detail::check_sieve_config(cfg);
    for (u64 x = 1; x <= cfg.x_cap; ++x) {
        u64 const v = sieve_f(cfg, x);
        auto fac = factorize(v);
        bool const sf = std::all_of(fac.begin(), fac.end(), [](auto const & pe) { return pe.second == 1; });
        if (!sf) continue;
        AdmissibleX a;
        a.x = x;
        a.f = v;
        a.factorization = std::move(fac);
        a.coprime_to_p = v % cfg.p != 0;
        a.odd = x % 2 == 1;
        a.prime_to_3 = v % 3 != 0;
        if (!a.coprime_to_p || !a.odd || !a.prime_to_3) throw error("admissible x violates a necessary condition");
        return a;
    }
    throw search_exhausted("no square-free value of f for x <= " + std::to_string(cfg.x_cap));
}

/// #{(x, d) : x, d >= 1, 3x^2 + 4p^(2n+1) = d^2 k <= y}.
inline u64 unit_pair_count(u64 y, u64 k, SieveConfig const & cfg) {
    detail::check_sieve_config(cfg);
    detail::check_y(cfg, y);
    if (k == 0) throw domain_error("unit_pair_count needs k >= 1");
    u64 const X = sieve_x_max(cfg, y);
    u64 count = 0;
    for (u64 x = 1; x <= X; ++x) {
        u64 const v = sieve_f(cfg, x);
        if (v % k == 0 && is_square(v / k)) ++count;
    }
    return count;
}

}  // namespace singmod
