#pragma once

// Numerical j-invariant at CM points and exact Hilbert class polynomials.
// j is evaluated from the eta quotient t = Delta(2 tau)/Delta(tau) through
// j = (1 + 256 t)^3 / t and checked against E4^3 / Delta.

#include <gmpxx.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "singmod/cm/bigfloat.hpp"
#include "singmod/cm/class_group.hpp"
#include "singmod/core/errors.hpp"
#include "singmod/core/parallel.hpp"
#include "singmod/padic/polynomial.hpp"

namespace singmod {

namespace detail {

// Binary exponent of the larger component, LONG_MIN for zero.
inline long magnitude2(mp::Complex const & z) {
    return std::max(z.re.log2_magnitude(), z.im.log2_magnitude());
}

}  // namespace detail

/// prod_{n>=1} (1 - q^n), summed as the pentagonal series
/// 1 + sum_{k>=1} (-1)^k (q^{k(3k-1)/2} + q^{k(3k+1)/2}).
inline mp::Complex euler_product(mp::Complex const & q) {
    mpfr_prec_t const prec = q.prec();
    mp::Complex sum(mp::Real(prec, 1L), mp::Real(prec));
    mp::Complex const q3 = q * q * q;
    mp::Complex a = q;        // q^{k(3k-1)/2}
    mp::Complex step = q * q3; // q^{3k+1}
    mp::Complex qk = q;       // q^k
    for (long k = 1;; ++k) {
        mp::Complex const b = a * qk;
        sum = (k % 2 == 1) ? sum - a - b : sum + a + b;
        if (detail::magnitude2(a) < -static_cast<long>(prec) - 8) break;
        a = a * step;
        step = step * q3;
        qk = qk * q;
    }
    return sum;
}

inline mp::Complex j_from_q(mp::Complex const & q) {
    mpfr_prec_t const prec = q.prec();
    mp::Complex const ratio = euler_product(q * q) / euler_product(q);
    mp::Complex const r2 = ratio * ratio;
    mp::Complex const r8 = (r2 * r2) * (r2 * r2);
    mp::Complex const t = q * r8 * r8 * r8;
    mp::Complex const one(mp::Real(prec, 1L), mp::Real(prec));
    mp::Complex const u = one + t.scaled(256);
    return u * u * u / t;
}

/// j(tau) for tau in the upper half plane.
inline mp::Complex j_invariant(mp::Complex const & tau) { return j_from_q(mp::Complex::q_of(tau)); }

/// j(tau) = E4(tau)^3 / Delta(tau) with E4 = 1 + 240 sum sigma_3(n) q^n.
inline mp::Complex j_eisenstein(mp::Complex const & tau) {
    mpfr_prec_t const prec = tau.prec();
    mp::Complex const q = mp::Complex::q_of(tau);
    mp::Complex e4(mp::Real(prec, 1L), mp::Real(prec));
    mp::Complex qn = q;
    for (long n = 1;; ++n) {
        long s3 = 0;
        for (long m = 1; m <= n; ++m) {
            if (n % m == 0) s3 += m * m * m;
        }
        mp::Complex const term = qn.scaled(240 * s3);
        e4 = e4 + term;
        if (detail::magnitude2(term) < -static_cast<long>(prec) - 8) break;
        qn = qn * q;
    }
    mp::Complex const p = euler_product(q);
    mp::Complex const p2 = p * p;
    mp::Complex const p8 = (p2 * p2) * (p2 * p2);
    mp::Complex const delta = q * p8 * p8 * p8;
    return e4 * e4 * e4 / delta;
}

/// tau_Q = (-b + sqrt(d)) / (2a).
inline mp::Complex cm_point(QuadraticForm const & f, mpfr_prec_t prec) {
    mp::Real const two_a(prec, 2 * f.a);
    mp::Real const re = mp::Real(prec, -f.b) / two_a;
    mp::Real const im = mp::Real(prec, -f.discriminant()).sqrt() / two_a;
    return {re, im};
}

struct HcpOptions {
    long long max_abs_d = 50000;
    std::string cache_dir;      // empty disables the disk cache
    unsigned threads = 0;       // 0 = hardware concurrency
    long precision_bits = 0;    // 0 = chosen from the size of the roots
    int attempts = 3;           // precision doubles between attempts
};

/// Working precision in bits: the coefficient size bound
/// sum_Q pi sqrt|d| / a_Q / log 2 plus h bits for the binomial growth
/// and a fixed guard.
inline long hcp_precision_bits(ClassGroup const & g) {
    double bits = 0;
    double const root = std::sqrt(static_cast<double>(-g.d()));
    for (auto const & f : g.forms()) bits += M_PI * root / static_cast<double>(f.a) / std::log(2.0);
    return static_cast<long>(std::ceil(bits)) + g.class_number() + 64;
}

/// Sum of the coefficients modulo 2^64.
inline u64 hcp_checksum(IntegerPolynomial const & h) {
    u64 sum = 0;
    for (auto const & c : h.coefficients()) {
        mpz_class r;
        mpz_fdiv_r_2exp(r.get_mpz_t(), c.get_mpz_t(), 64);
        mpz_class hi = r >> 32;
        mpz_class lo = r - (hi << 32);
        sum += (static_cast<u64>(hi.get_ui()) << 32) | static_cast<u64>(lo.get_ui());
    }
    return sum;
}

namespace detail {

// Product of (X - j(tau_Q)) at a fixed precision; throws precision_failure
// if a coefficient is not within 1/4 of an integer.
inline IntegerPolynomial hcp_at_precision(ClassGroup const & g, long bits, unsigned threads) {
    auto const & forms = g.forms();
    std::size_t const h = forms.size();
    std::vector<mp::Complex> roots(h, mp::Complex(2));
    std::vector<int> mismatch(h, 0);
    parallel_for(
        h,
        [&](std::size_t i) {
            mp::Complex const tau = cm_point(forms[i], bits);
            roots[i] = j_invariant(tau);
            // Independent evaluation at a modest precision.
            mpfr_prec_t const check = std::min<long>(bits, 256);
            mp::Complex const other = j_eisenstein(cm_point(forms[i], check));
            mp::Complex const diff = other - roots[i];
            long const scale = std::max(0L, magnitude2(roots[i]));
            if (magnitude2(diff) > scale - static_cast<long>(check) + 24) mismatch[i] = 1;
        },
        threads == 0 ? default_thread_count() : threads);
    for (std::size_t i = 0; i < h; ++i) {
        if (mismatch[i]) {
            throw precision_failure("j(tau) cross-check failed for form " + forms[i].to_string());
        }
    }
    // Coefficients low to high, multiplied in the sorted order of forms.
    std::vector<mp::Complex> poly;
    poly.emplace_back(mp::Real(bits, 1L), mp::Real(bits));
    for (std::size_t i = 0; i < h; ++i) {
        std::vector<mp::Complex> next(poly.size() + 1, mp::Complex(bits));
        for (std::size_t k = 0; k < poly.size(); ++k) {
            next[k + 1] = next[k + 1] + poly[k];
            next[k] = next[k] - poly[k] * roots[i];
        }
        poly = std::move(next);
    }
    mp::Real const quarter(bits, "0.25");
    std::vector<mpz_class> coeffs;
    for (std::size_t k = 0; k < poly.size(); ++k) {
        auto [z, dist] = poly[k].re.round();
        if (!(dist < quarter) || !(poly[k].im.abs() < quarter)) {
            throw precision_failure("coefficient " + std::to_string(k) + " of H_" + std::to_string(g.d()) +
                                    " is not within 1/4 of an integer at " + std::to_string(bits) + " bits");
        }
        coeffs.push_back(z);
    }
    return IntegerPolynomial(std::move(coeffs));
}

inline std::mutex & hcp_cache_mutex() {
    static std::mutex m;
    return m;
}

inline std::filesystem::path hcp_cache_path(std::string const & dir, long long d) {
    return std::filesystem::path(dir) / ("hcp_" + std::to_string(-d) + ".txt");
}

}  // namespace detail

/// Reads a cached class polynomial; returns false if no file exists and
/// throws validation_error if the file is malformed.
inline bool hcp_cache_load(std::string const & dir, long long d, IntegerPolynomial & out) {
    std::lock_guard lock(detail::hcp_cache_mutex());
    auto const path = detail::hcp_cache_path(dir, d);
    std::ifstream in(path);
    if (!in) return false;
    long long dd = 0;
    long h = -1;
    if (!(in >> dd >> h) || dd != d || h < 1) throw validation_error("cache-header", path.string());
    std::vector<mpz_class> coeffs;
    for (long i = 0; i <= h; ++i) {
        std::string s;
        if (!(in >> s)) throw validation_error("cache-length", path.string());
        mpz_class c;
        if (c.set_str(s, 10) != 0) throw validation_error("cache-integer", path.string());
        coeffs.push_back(c);
    }
    std::string sum;
    if (!(in >> sum)) throw validation_error("cache-checksum", path.string());
    IntegerPolynomial const p(std::move(coeffs));
    if (p.degree() != h || !p.is_monic()) throw validation_error("cache-monic", path.string());
    if (std::to_string(hcp_checksum(p)) != sum) throw validation_error("cache-checksum", path.string());
    out = p;
    return true;
}

/// Writes a class polynomial atomically (temporary file, then rename).
inline void hcp_cache_store(std::string const & dir, long long d, IntegerPolynomial const & p) {
    std::lock_guard lock(detail::hcp_cache_mutex());
    std::filesystem::create_directories(dir);
    auto const path = detail::hcp_cache_path(dir, d);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << d << ' ' << p.degree() << '\n';
        for (auto const & c : p.coefficients()) out << c.get_str() << '\n';
        out << hcp_checksum(p) << '\n';
        if (!out) throw error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

/// Class polynomial of the order of discriminant d with exact integer
/// coefficients.
inline IntegerPolynomial hilbert_class_poly(long long d, HcpOptions const & opt = {}) {
    if (-d > opt.max_abs_d) {
        throw resource_error("|d| = " + std::to_string(-d) + " exceeds the cap " + std::to_string(opt.max_abs_d));
    }
    ClassGroup const g(d);
    IntegerPolynomial cached;
    if (!opt.cache_dir.empty() && hcp_cache_load(opt.cache_dir, d, cached)) {
        if (cached.degree() != g.class_number()) throw validation_error("cache-degree", "hcp_" + std::to_string(-d));
        return cached;
    }
    long bits = opt.precision_bits > 0 ? opt.precision_bits : hcp_precision_bits(g);
    for (int attempt = 1;; ++attempt) {
        try {
            IntegerPolynomial p = detail::hcp_at_precision(g, bits, opt.threads);
            if (!opt.cache_dir.empty()) hcp_cache_store(opt.cache_dir, d, p);
            return p;
        } catch (precision_failure const &) {
            if (attempt >= opt.attempts) throw;
            bits *= 2;
        }
    }
}

}  // namespace singmod
