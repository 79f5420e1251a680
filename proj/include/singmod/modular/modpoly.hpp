#pragma once

// The classical modular polynomials Phi_N(X, Y) for N in {1, 2, 3, 5, 7},
// read from text tables and validated on load, and the degree Psi(N).

#include <gmpxx.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "singmod/cm/hilbert.hpp"
#include "singmod/core/arith.hpp"
#include "singmod/core/errors.hpp"
#include "singmod/padic/number.hpp"
#include "singmod/padic/polynomial.hpp"

#ifndef SINGMOD_TABLE_DIR
#define SINGMOD_TABLE_DIR "data"
#endif

namespace singmod {

/// Psi(N) = N prod_{l | N} (1 + 1/l).
inline u64 psi(u64 n) {
    if (n == 0) throw domain_error("psi needs N >= 1");
    u64 r = n;
    for (auto const & [ell, e] : factorize(n)) r = r / ell * (ell + 1);
    return r;
}

class ModularPolynomial {
  public:
    ModularPolynomial(int level, std::vector<std::vector<mpz_class>> coeffs) : n_(level), c_(std::move(coeffs)) {}

    int level() const { return n_; }
    /// Coefficient of X^i Y^j.
    mpz_class coeff(int i, int j) const {
        if (i < 0 || j < 0 || i >= static_cast<int>(c_.size()) || j >= static_cast<int>(c_[i].size())) return 0;
        return c_[i][j];
    }
    int degree_x() const {
        for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i) {
            for (auto const & v : c_[i]) {
                if (v != 0) return i;
            }
        }
        return -1;
    }
    int degree_y() const {
        int d = -1;
        for (auto const & row : c_) {
            for (int j = 0; j < static_cast<int>(row.size()); ++j) {
                if (row[j] != 0) d = std::max(d, j);
            }
        }
        return d;
    }
    int size() const { return static_cast<int>(c_.size()); }

    mpz_class eval(mpz_class const & x, mpz_class const & y) const { return in_y(x).eval(y); }

    /// Phi_N(x, Y) as a polynomial in Y.
    IntegerPolynomial in_y(mpz_class const & x) const {
        std::vector<mpz_class> out(c_.size(), 0);
        for (int j = 0; j < size(); ++j) {
            mpz_class v = 0;
            for (int i = size() - 1; i >= 0; --i) v = v * x + coeff(i, j);
            out[j] = v;
        }
        return IntegerPolynomial(out);
    }

    PadicPolynomial in_y(PadicNumber const & x) const {
        long const prec = x.is_exact_zero() ? 64 : x.absolute_precision() + 8;
        std::vector<PadicNumber> out;
        for (int j = 0; j < size(); ++j) {
            PadicNumber v = PadicNumber::zero(x.ring());
            for (int i = size() - 1; i >= 0; --i) {
                v = v * x;
                if (coeff(i, j) != 0) v = v + PadicNumber::from_integer(coeff(i, j), x.ring(), prec);
            }
            out.push_back(v);
        }
        return PadicPolynomial(out);
    }

    PadicNumber eval(PadicNumber const & x, PadicNumber const & y) const {
        PadicPolynomial const f = in_y(x);
        return f.eval(y.embed(lcm_ring(f.ring(), y.ring())));
    }

    /// Complex evaluation, for the numerical modular identity.
    mp::Complex eval(mp::Complex const & x, mp::Complex const & y) const {
        mpfr_prec_t const prec = x.prec();
        mp::Complex r(prec);
        for (int i = size() - 1; i >= 0; --i) {
            mp::Complex row(prec);
            for (int j = size() - 1; j >= 0; --j) {
                row = row * y + mp::Complex(mp::Real(prec, coeff(i, j)), mp::Real(prec));
            }
            r = r * x + row;
        }
        return r;
    }

    /// Sum of |c_ij| |x|^i |y|^j, the scale for relative residuals.
    mp::Real abs_eval(mp::Real const & ax, mp::Real const & ay) const {
        mpfr_prec_t const prec = ax.prec();
        mp::Real r(prec);
        for (int i = size() - 1; i >= 0; --i) {
            mp::Real row(prec);
            for (int j = size() - 1; j >= 0; --j) row = row * ay + mp::Real(prec, coeff(i, j)).abs();
            r = r * ax + row;
        }
        return r;
    }

    /// Sum of the absolute values of the coefficients.
    mpz_class l1_norm() const {
        mpz_class s = 0;
        for (auto const & row : c_) {
            for (auto const & v : row) s += abs(v);
        }
        return s;
    }

  private:
    static RingPtr lcm_ring(RingPtr const & a, RingPtr const & b) {
        int const f = std::lcm(a->degree(), b->degree());
        return unramified_ring(a->prime(), f);
    }

    int n_;
    std::vector<std::vector<mpz_class>> c_;
};

inline std::string default_table_dir() {
    if (char const * env = std::getenv("SINGMOD_TABLES")) return env;
    return SINGMOD_TABLE_DIR;
}

namespace detail {

inline void check_modular_identity(ModularPolynomial const & phi) {
    mpfr_prec_t const prec = 1024;
    int const n = phi.level();
    for (auto const & [re, im] : std::vector<std::pair<char const *, char const *>>{
             {"0", "1.1"}, {"0.2", "1.05"}, {"-0.31", "0.93"}}) {
        mp::Complex const tau(mp::Real(prec, re), mp::Real(prec, im));
        mp::Complex const j1 = j_invariant(tau);
        mp::Complex const j2 = j_invariant(tau.scaled(n));
        mp::Real const scale = phi.abs_eval(j1.norm(), j2.norm());
        mp::Real const residual = phi.eval(j1, j2).norm();
        if (!(residual < scale * mp::Real(prec, "1e-30"))) {
            throw validation_error("modular-identity", "Phi_" + std::to_string(n) + "(j(tau), j(N tau)) != 0 at tau = " +
                                                           std::string(re) + " + " + im + "i");
        }
    }
}

}  // namespace detail

/// Parses and validates a table; `text` holds lines "i j c".
inline ModularPolynomial parse_modular_polynomial(int n, std::string const & text) {
    int const deg = static_cast<int>(psi(static_cast<u64>(n)));
    std::vector<std::vector<mpz_class>> c(deg + 1, std::vector<mpz_class>(deg + 1, 0));
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        long i, j;
        std::string v;
        if (!(ls >> i >> j >> v)) throw validation_error("format", "bad line in Phi_" + std::to_string(n) + ": " + line);
        mpz_class z;
        if (z.set_str(v, 10) != 0) throw validation_error("integer-coefficients", "Phi_" + std::to_string(n) + ": " + v);
        if (i < 0 || j < 0 || i > deg || j > deg) {
            throw validation_error("bidegree", "Phi_" + std::to_string(n) + " has a term beyond degree " + std::to_string(deg));
        }
        if (n > 1 && i < j) throw validation_error("symmetry", "Phi_" + std::to_string(n) + " stores only i >= j");
        c[i][j] = z;
        if (n > 1) c[j][i] = z;
    }
    ModularPolynomial phi(n, std::move(c));
    if (phi.degree_x() != deg || phi.degree_y() != deg) {
        throw validation_error("bidegree", "Phi_" + std::to_string(n) + " does not have bidegree Psi(N)");
    }
    if (abs(phi.coeff(0, deg)) != 1 || abs(phi.coeff(deg, 0)) != 1) {
        throw validation_error("monic", "Phi_" + std::to_string(n) + " is not monic in Y");
    }
    for (int i = 0; i <= deg; ++i) {
        for (int j = 0; j <= deg; ++j) {
            if (n > 1 && phi.coeff(i, j) != phi.coeff(j, i)) throw validation_error("symmetry", "Phi_" + std::to_string(n));
        }
    }
    detail::check_modular_identity(phi);
    return phi;
}

inline std::vector<int> supported_levels() { return {1, 2, 3, 5, 7}; }

/// Phi_N from `<dir>/phi_<N>.txt`; loaded and validated once per process.
inline ModularPolynomial const & modular_poly(int n, std::string const & dir = default_table_dir()) {
    static std::mutex lock;
    static std::map<std::pair<std::string, int>, std::unique_ptr<ModularPolynomial>> cache;
    bool supported = false;
    for (int m : supported_levels()) supported = supported || m == n;
    if (!supported) throw domain_error("modular polynomial of level " + std::to_string(n) + " is not tabulated");
    std::lock_guard guard(lock);
    auto & slot = cache[{dir, n}];
    if (!slot) {
        std::string const path = dir + "/phi_" + std::to_string(n) + ".txt";
        std::ifstream in(path);
        if (!in) throw validation_error("missing-table", path);
        std::stringstream ss;
        ss << in.rdbuf();
        slot = std::make_unique<ModularPolynomial>(parse_modular_polynomial(n, ss.str()));
    }
    return *slot;
}

}  // namespace singmod
