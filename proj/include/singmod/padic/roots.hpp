#pragma once

// Hensel lifting and the search for roots lying in unramified extensions.
//
// The search walks the tree of residue classes: at a node the polynomial
// F(r + p^s Y), divided by its content, is reduced modulo p; simple residue
// roots are finished by Newton iteration and multiple ones are refined one
// digit further. Branches without residue roots hold only roots that are
// ramified or live in a larger residue field.

#include <gmpxx.h>

#include <algorithm>
#include <functional>
#include <vector>

#include "singmod/core/arith.hpp"
#include "singmod/core/errors.hpp"
#include "singmod/padic/finite_field.hpp"
#include "singmod/padic/number.hpp"
#include "singmod/padic/polynomial.hpp"
#include "singmod/padic/ring.hpp"

namespace singmod {

/// Newton iteration from a0 to a root known to absolute precision `target`.
inline PadicNumber hensel_lift(PadicPolynomial const & f, PadicNumber const & a0, long target) {
    if (f.degree() < 1) throw domain_error("hensel_lift needs a nonconstant polynomial");
    PadicPolynomial const df = f.derivative();
    PadicNumber const fa = f.eval(a0);
    PadicNumber const dfa = df.eval(a0);
    if (dfa.is_zero()) throw non_smooth_point("derivative vanishes at the starting point");
    long const vd = dfa.valuation();
    if (fa.is_exact_zero()) return a0;
    if (fa.ord_lower_bound() <= 2 * vd) {
        throw non_smooth_point("ord f(a0) = " + std::to_string(fa.ord_lower_bound()) + " is not above 2*ord f'(a0) = " +
                               std::to_string(2 * vd));
    }
    long const work = target + 2 * vd + 2;
    long const lead = a0.is_zero() ? 0 : a0.valuation();
    PadicNumber x = a0.is_zero() ? PadicNumber::from_integer(0, a0.ring(), work) : a0.padded(work - lead);
    for (int iter = 0; iter < 128; ++iter) {
        PadicNumber const fx = f.eval(x);
        if (fx.is_exact_zero()) return x.truncated(target);
        PadicNumber const dx = df.eval(x);
        if (fx.ord_lower_bound() - vd >= target + vd) return x.truncated(target);
        if (fx.is_unresolved_zero()) {
            if (fx.absolute_precision() - vd >= target) return x.truncated(target);
            throw precision_exhausted("coefficients too imprecise for the requested root precision");
        }
        x = x - fx / dx;
    }
    throw precision_exhausted("Newton iteration did not converge");
}

namespace detail {

struct RootTreeNeedsPrecision {};

struct RootCandidate {
    Coords value;   // root of the integral polynomial, modulo p^precision
    long precision;
    long level;     // digits shared with no other root beyond this level
};

class RootTree {
  public:
    RootTree(RingPtr ring, long relative_target) : r_(std::move(ring)), target_(relative_target) {
        field_ = &r_->residue_field();
    }

    std::vector<RootCandidate> run(std::vector<Coords> g, long precision) {
        out_.clear();
        descend(std::move(g), precision, r_->zero(), 0);
        return out_;
    }

  private:
    using Poly = std::vector<Coords>;

    Coords eval(Poly const & g, Coords const & y, long k) const {
        Coords acc = r_->zero();
        for (auto it = g.rbegin(); it != g.rend(); ++it) acc = r_->add(r_->mul(acc, y, k), *it, k);
        return acc;
    }

    Poly derivative(Poly const & g, long k) const {
        Poly d;
        for (std::size_t i = 1; i < g.size(); ++i) d.push_back(r_->scale(g[i], static_cast<unsigned long>(i), k));
        return d;
    }

    // Coefficients of g(a + Z) multiplied through by p^i on Z^i.
    Poly shift_and_scale(Poly g, Coords const & a, long k) const {
        std::size_t const n = g.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = n - 1; j > i; --j) g[j - 1] = r_->add(g[j - 1], r_->mul(g[j], a, k), k);
        }
        for (std::size_t i = 1; i < n; ++i) g[i] = r_->scale(g[i], r_->ppow(std::min<long>(static_cast<long>(i), k)), k);
        return g;
    }

    void descend(Poly g, long prec, Coords const & r, long s) {
        long c = prec;
        for (auto const & a : g) c = std::min(c, r_->valuation(a, prec));
        if (c >= prec) throw RootTreeNeedsPrecision{};
        if (c > 0) {
            for (auto & a : g) {
                a = r_->reduce(std::move(a), prec);
                for (auto & x : a) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), r_->ppow(c).get_mpz_t());
            }
            prec -= c;
        }
        ff::FqPolyRing ring(*field_);
        ff::FqPolyRing::Poly gbar;
        for (auto const & a : g) gbar.push_back(r_->residue(a));
        ring.trim(gbar);
        if (ff::FqPolyRing::degree(gbar) < 1) return;
        auto const dgbar = ring.derivative(gbar);
        for (auto const & rho : ring.roots(gbar)) {
            Coords const lifted = r_->lift(rho);
            Coords const base = r_->add(r, r_->scale(lifted, r_->ppow(s), s + prec), s + prec);
            if (!field_->is_zero(ring.eval(dgbar, rho))) {
                Coords y = newton(g, lifted, prec);
                Coords const x = r_->add(r, r_->scale(y, r_->ppow(s), s + prec), s + prec);
                long const v = r_->valuation(x, s + prec);
                if (v >= s + prec || s + prec < v + target_) throw RootTreeNeedsPrecision{};
                out_.push_back({x, s + prec, s});
            } else {
                descend(shift_and_scale(g, lifted, prec), prec, base, s + 1);
            }
        }
    }

    Coords newton(Poly const & g, Coords y, long k) const {
        Poly const dg = derivative(g, k);
        for (int iter = 0; iter < 200; ++iter) {
            Coords const gy = eval(g, y, k);
            if (r_->is_zero(gy, k)) return y;
            Coords const step = r_->mul(gy, r_->inverse(eval(dg, y, k), k), k);
            y = r_->sub(y, step, k);
        }
        throw error("internal: Newton iteration on a simple root did not converge");
    }

    RingPtr r_;
    long target_;
    ff::FiniteField const * field_;
    std::vector<RootCandidate> out_;
};

/// Supplies the integral coefficients over R_K modulo p^A; returns the
/// precision actually available (which may be below A).
using CoefficientSupplier = std::function<long(RingPtr const &, long, std::vector<Coords> &)>;

inline std::vector<PadicNumber> roots_with_exact_degree(u64 p, int k0, int degree, CoefficientSupplier const & supply,
                                                        long relative_target, long max_precision) {
    long precision = std::min(max_precision, relative_target + 16);
    for (;;) {
        RingPtr const ring = unramified_ring(p, degree, precision);
        std::vector<Coords> g;
        long const got = supply(ring, precision, g);
        try {
            RootTree tree(ring, relative_target);
            auto candidates = tree.run(std::move(g), got);
            std::vector<PadicNumber> out;
            for (auto const & cand : candidates) {
                bool in_subfield = false;
                int const m = degree / k0;
                for (auto const & [ell, e] : m > 1 ? factorize(static_cast<u64>(m)) : std::vector<std::pair<u64, int>>{}) {
                    long const sub = degree / static_cast<long>(ell);
                    Coords moved = cand.value;
                    for (long i = 0; i < sub; ++i) moved = ring->frobenius(moved, cand.level + 1);
                    if (ring->is_zero(ring->sub(moved, cand.value, cand.level + 1), cand.level + 1)) {
                        in_subfield = true;
                        break;
                    }
                }
                if (!in_subfield) out.push_back(PadicNumber::from_coordinates(ring, cand.value, cand.precision));
            }
            return out;
        } catch (RootTreeNeedsPrecision const &) {
            if (got < precision || precision >= max_precision) {
                throw precision_exhausted("roots remain indistinguishable at precision " + std::to_string(got));
            }
            precision = std::min(max_precision, 2 * precision);
        }
    }
}

inline bool coordinates_less(PadicNumber const & a, PadicNumber const & b) {
    long const k = std::min(a.absolute_precision(), b.absolute_precision());
    return a.coordinates(k) < b.coordinates(k);
}

}  // namespace detail

inline constexpr long default_max_root_precision = 4096;

/// Roots of f in unramified extensions of residue degree <= f_max, each
/// reported once in the smallest such ring, with relative precision at
/// least `precision`. An exact zero root is reported as the zero marker.
inline std::vector<PadicNumber> roots_in_unramified(IntegerPolynomial const & f, u64 p, int f_max, long precision,
                                                    long max_precision = default_max_root_precision) {
    if (f.is_zero()) throw domain_error("roots of the zero polynomial");
    std::vector<PadicNumber> out;
    if (f.zero_multiplicity() > 0) out.push_back(PadicNumber::zero(unramified_ring(p, 1)));
    IntegerPolynomial g = f.without_zero_roots().squarefree_part();
    if (g.degree() < 1) return out;
    // Substitute X = Y / p^k so that every root becomes integral.
    NewtonPolygon const np = newton_polygon(g, p);
    long k = 0;
    for (auto const & [val, mult] : np.root_valuations()) {
        if (val < 0) {
            mpz_class up;
            mpz_cdiv_q(up.get_mpz_t(), mpz_class(-val.get_num()).get_mpz_t(), val.get_den().get_mpz_t());
            k = std::max(k, up.get_si());
        }
    }
    std::vector<mpz_class> scaled = g.coefficients();
    for (int i = 0; i <= g.degree(); ++i) scaled[i] *= power(static_cast<long>(p), static_cast<unsigned long>(k * (g.degree() - i)));
    IntegerPolynomial const h = IntegerPolynomial(scaled).primitive();

    detail::CoefficientSupplier const supply = [&h](RingPtr const & ring, long a, std::vector<Coords> & g_out) {
        g_out.clear();
        for (auto const & c : h.coefficients()) {
            Coords v = ring->zero();
            v[0] = ring->reduce_scalar(c, a);
            g_out.push_back(std::move(v));
        }
        return a;
    };
    for (int deg = 1; deg <= f_max; ++deg) {
        auto found = detail::roots_with_exact_degree(p, 1, deg, supply, precision + k, max_precision);
        std::sort(found.begin(), found.end(), detail::coordinates_less);
        for (auto & x : found) {
            PadicNumber y = k ? x / PadicNumber::from_integer(power(static_cast<long>(p), k), x.ring(), x.relative_precision()) : x;
            out.push_back(y.truncated(y.valuation() + precision));
        }
    }
    return out;
}

/// Roots of a polynomial with p-adic coefficients in unramified extensions
/// whose degree is a multiple of the coefficient ring's degree and at most
/// f_max. Clusters that cannot be separated raise precision_exhausted.
inline std::vector<PadicNumber> roots_in_unramified(PadicPolynomial const & f, int f_max, long precision) {
    u64 const p = f.prime();
    int const k0 = f.ring()->degree();
    std::vector<PadicNumber> out;
    std::vector<PadicNumber> coeffs = f.coefficients();
    int zeros = 0;
    while (zeros < static_cast<int>(coeffs.size()) && coeffs[zeros].is_exact_zero()) ++zeros;
    if (zeros > 0) {
        out.push_back(PadicNumber::zero(f.ring()));
        coeffs.erase(coeffs.begin(), coeffs.begin() + zeros);
    }
    if (coeffs.size() < 2) return out;
    PadicPolynomial const g(coeffs);
    NewtonPolygon const np = newton_polygon(g);
    long k = 0;
    for (auto const & [val, mult] : np.root_valuations()) {
        if (val < 0) {
            mpz_class up;
            mpz_cdiv_q(up.get_mpz_t(), mpz_class(-val.get_num()).get_mpz_t(), val.get_den().get_mpz_t());
            k = std::max(k, up.get_si());
        }
    }
    int const n = g.degree();
    std::vector<PadicNumber> scaled;
    for (int i = 0; i <= n; ++i) {
        PadicNumber const c = g.coeff(i);
        long const shift = k * (n - i);
        scaled.push_back(c.is_exact_zero() ? c
                                           : c * PadicNumber::from_integer(power(static_cast<long>(p), shift), c.ring(),
                                                                           std::max(1L, c.relative_precision())));
    }
    long minval = LONG_MAX;
    for (auto const & c : scaled) {
        if (!c.is_exact_zero()) minval = std::min(minval, c.ord_lower_bound());
    }

    detail::CoefficientSupplier const supply = [&](RingPtr const & ring, long a, std::vector<Coords> & g_out) {
        g_out.clear();
        long avail = a;
        for (auto const & c : scaled) {
            if (c.is_exact_zero()) continue;
            avail = std::min(avail, c.absolute_precision() - minval);
        }
        for (auto const & c : scaled) {
            if (c.is_exact_zero()) {
                g_out.push_back(ring->zero());
                continue;
            }
            PadicNumber const e = c.embed(ring);
            // Shift valuations down by minval to make the content zero.
            PadicNumber const s = minval == 0 ? e : e / PadicNumber::from_integer(power(static_cast<long>(p), minval), ring, a + 1);
            g_out.push_back(s.coordinates(std::max(1L, avail)));
        }
        return std::max(1L, avail);
    };
    for (int deg = k0; deg <= f_max; deg += k0) {
        auto found = detail::roots_with_exact_degree(p, k0, deg, supply, precision + k, precision + k + 4096);
        std::sort(found.begin(), found.end(), detail::coordinates_less);
        for (auto & x : found) {
            PadicNumber y = k ? x / PadicNumber::from_integer(power(static_cast<long>(p), k), x.ring(), x.relative_precision()) : x;
            out.push_back(y.is_zero() ? y : y.truncated(y.valuation() + precision));
        }
    }
    return out;
}

}  // namespace singmod
