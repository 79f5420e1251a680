#pragma once

// Elementary integer number theory shared by the modules: modular
// arithmetic on 64-bit words, primality, factorisation, Kronecker symbols
// and small multiplicative functions.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "singmod/core/errors.hpp"

namespace singmod {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

/// Non-negative residue of a signed value.
inline u64 mod_reduce(i64 a, u64 m) {
    i64 const r = a % static_cast<i64>(m);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

inline u64 mod_reduce(mpz_class const & a, u64 m) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), m);
    return r.get_ui();
}

/// Inverse modulo m; throws if gcd(a, m) != 1.
inline u64 invmod(u64 a, u64 m) {
    i128 t = 0, nt = 1;
    i128 r = m, nr = a % m;
    while (nr != 0) {
        i128 const q = r / nr;
        std::tie(t, nt) = std::pair<i128, i128>(nt, t - q * nt);
        std::tie(r, nr) = std::pair<i128, i128>(nr, r - q * nr);
    }
    if (r != 1) throw domain_error("invmod: argument not invertible");
    if (t < 0) t += m;
    return static_cast<u64>(t);
}

inline u64 isqrt(u64 n) {
    u64 r = static_cast<u64>(__builtin_sqrtl(static_cast<long double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline bool is_square(u64 n) {
    u64 const r = isqrt(n);
    return r * r == n;
}

/// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace detail {

inline u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

inline void factor_into(u64 n, std::vector<u64> & out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 const d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace detail

/// Prime factorisation as (prime, exponent) pairs in increasing order.
inline std::vector<std::pair<u64, int>> factorize(u64 n) {
    std::vector<std::pair<u64, int>> result;
    if (n == 0) throw domain_error("factorize: zero has no factorisation");
    for (u64 p = 2; p < 1000 && p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        result.emplace_back(p, e);
    }
    if (n > 1) {
        std::vector<u64> primes;
        detail::factor_into(n, primes);
        std::sort(primes.begin(), primes.end());
        for (u64 p : primes) {
            if (!result.empty() && result.back().first == p) {
                ++result.back().second;
            } else {
                result.emplace_back(p, 1);
            }
        }
    }
    return result;
}

/// Number of distinct prime divisors.
inline int omega(u64 n) { return n == 1 ? 0 : static_cast<int>(factorize(n).size()); }

inline int mobius(u64 n) {
    auto const f = factorize(n);
    for (auto const & [p, e] : f) {
        if (e > 1) return 0;
    }
    return f.size() % 2 ? -1 : 1;
}

inline bool is_squarefree(u64 n) { return mobius(n) != 0; }

/// Kronecker symbol (a | n) for n >= 0.
inline int kronecker(i64 a, u64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n % 2 == 0) {
        if (a % 2 == 0) return 0;
        int v = 0;
        while (n % 2 == 0) {
            n /= 2;
            ++v;
        }
        u64 const a8 = mod_reduce(a, 8);
        if ((v & 1) && (a8 == 3 || a8 == 5)) result = -result;
    }
    // Jacobi symbol for odd n.
    u64 x = mod_reduce(a, n);
    while (x != 0) {
        while (x % 2 == 0) {
            x /= 2;
            u64 const r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(x, n);
        if (x % 4 == 3 && n % 4 == 3) result = -result;
        x %= n;
    }
    return n == 1 ? result : 0;
}

/// p-adic valuation of a nonzero integer.
inline long valuation(mpz_class const & n, unsigned long p) {
    if (n == 0) throw domain_error("valuation of zero");
    mpz_class t = n;
    long v = 0;
    while (mpz_divisible_ui_p(t.get_mpz_t(), p)) {
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), p);
        ++v;
    }
    return v;
}

inline long valuation(u64 n, u64 p) {
    if (n == 0) throw domain_error("valuation of zero");
    long v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

inline mpz_class power(long base, unsigned long exp) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), exp);
    return base < 0 && (exp & 1) ? mpz_class(-r) : r;
}

/// Sieve of Eratosthenes.
inline std::vector<u64> primes_up_to(u64 n) {
    std::vector<u64> primes;
    if (n < 2) return primes;
    std::vector<bool> composite(n + 1, false);
    for (u64 i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (u64 j = i * i; j <= n; j += i) composite[j] = true;
    }
    return primes;
}

/// Square root of a quadratic residue a modulo an odd prime (Tonelli-Shanks).
inline u64 sqrt_mod_prime(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    if (p == 2) return a;
    if (powmod(a, (p - 1) / 2, p) != 1) throw domain_error("sqrt_mod_prime: non-residue");
    u64 q = p - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    u64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    u64 m = static_cast<u64>(s), c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        u64 b = c;
        for (u64 j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

inline std::string to_string(mpq_class const & q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace singmod
