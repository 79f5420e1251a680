#pragma once

// Exact integer polynomials, polynomials with p-adic coefficients, and
// Newton polygons with exact rational slopes.

#include <gmpxx.h>

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "singmod/core/arith.hpp"
#include "singmod/core/errors.hpp"
#include "singmod/padic/finite_field.hpp"
#include "singmod/padic/number.hpp"

namespace singmod {

class IntegerPolynomial {
  public:
    IntegerPolynomial() = default;
    /// Coefficients from the constant term upwards.
    explicit IntegerPolynomial(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }

    static IntegerPolynomial monomial(long degree, mpz_class const & c = 1) {
        std::vector<mpz_class> v(degree + 1, 0);
        v[degree] = c;
        return IntegerPolynomial(std::move(v));
    }

    /// Product of (X - r) over the given roots.
    static IntegerPolynomial from_roots(std::vector<mpz_class> const & roots) {
        IntegerPolynomial r({1});
        for (auto const & a : roots) r = r * IntegerPolynomial({-a, 1});
        return r;
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    std::vector<mpz_class> const & coefficients() const { return c_; }
    mpz_class coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : mpz_class(0); }
    mpz_class const & leading() const { return c_.back(); }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }

    mpz_class eval(mpz_class const & x) const {
        mpz_class r = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
        return r;
    }

    IntegerPolynomial derivative() const {
        std::vector<mpz_class> d;
        for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<unsigned long>(i));
        return IntegerPolynomial(std::move(d));
    }

    friend IntegerPolynomial operator+(IntegerPolynomial const & a, IntegerPolynomial const & b) {
        std::vector<mpz_class> r(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return IntegerPolynomial(std::move(r));
    }

    friend IntegerPolynomial operator-(IntegerPolynomial const & a, IntegerPolynomial const & b) {
        std::vector<mpz_class> r(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
        return IntegerPolynomial(std::move(r));
    }

    friend IntegerPolynomial operator*(IntegerPolynomial const & a, IntegerPolynomial const & b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<mpz_class> r(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                mpz_addmul(r[i + j].get_mpz_t(), a.c_[i].get_mpz_t(), b.c_[j].get_mpz_t());
            }
        }
        return IntegerPolynomial(std::move(r));
    }

    friend bool operator==(IntegerPolynomial const & a, IntegerPolynomial const & b) { return a.c_ == b.c_; }

    /// Order of vanishing at X = 0.
    int zero_multiplicity() const {
        int k = 0;
        while (k < static_cast<int>(c_.size()) && c_[k] == 0) ++k;
        return k;
    }

    /// Divides by X^zero_multiplicity().
    IntegerPolynomial without_zero_roots() const {
        int const k = zero_multiplicity();
        return IntegerPolynomial(std::vector<mpz_class>(c_.begin() + k, c_.end()));
    }

    mpz_class content() const {
        mpz_class g = 0;
        for (auto const & c : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        return g;
    }

    /// Polynomial with the same roots and no repeated factor, primitive and
    /// with positive leading coefficient.
    IntegerPolynomial squarefree_part() const {
        if (degree() < 1) return *this;
        if (is_squarefree_modular()) return primitive();
        auto const g = rational_gcd(to_rational(c_), to_rational(derivative().c_));
        auto quotient = rational_divide(to_rational(c_), g);
        mpz_class lcm_den = 1;
        for (auto const & q : quotient) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), q.get_den().get_mpz_t());
        std::vector<mpz_class> out;
        for (auto const & q : quotient) out.push_back(mpz_class(q * lcm_den));
        return IntegerPolynomial(std::move(out)).primitive();
    }

    IntegerPolynomial primitive() const {
        if (is_zero()) return *this;
        mpz_class g = content();
        if (c_.back() < 0) g = -g;
        std::vector<mpz_class> r = c_;
        for (auto & c : r) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
        return IntegerPolynomial(std::move(r));
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int i = degree(); i >= 0; --i) {
            mpz_class const & c = c_[i];
            if (c == 0) continue;
            mpz_class const mag = abs(c);
            os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
            if (i == 0 || mag != 1) os << mag.get_str() << (i ? "*" : "");
            if (i >= 1) os << "X";
            if (i >= 2) os << "^" << i;
            first = false;
        }
        return os.str();
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    bool is_squarefree_modular() const {
        u64 q = (1ULL << 61) - 1;
        for (int attempt = 0; attempt < 4; q -= 2) {
            if (!is_prime(q)) continue;
            ++attempt;
            if (mod_reduce(c_.back(), q) == 0) continue;
            ff::FpPoly a, b;
            for (auto const & c : c_) a.push_back(mod_reduce(c, q));
            for (auto const & c : derivative().c_) b.push_back(mod_reduce(c, q));
            ff::trim(a);
            ff::trim(b);
            if (ff::degree(ff::gcd(a, b, q)) == 0) return true;
        }
        return false;
    }

    using QPoly = std::vector<mpq_class>;

    static QPoly to_rational(std::vector<mpz_class> const & c) { return QPoly(c.begin(), c.end()); }

    static void trim(QPoly & a) {
        while (!a.empty() && a.back() == 0) a.pop_back();
    }

    static QPoly rational_remainder(QPoly a, QPoly const & b, QPoly * quotient) {
        int const db = static_cast<int>(b.size()) - 1;
        if (quotient) quotient->assign(std::max<int>(0, static_cast<int>(a.size()) - db), 0);
        for (int i = static_cast<int>(a.size()) - 1; i >= db; --i) {
            if (a[i] == 0) continue;
            mpq_class const c = a[i] / b.back();
            if (quotient) (*quotient)[i - db] = c;
            for (int j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
        }
        trim(a);
        return a;
    }

    static QPoly rational_gcd(QPoly a, QPoly b) {
        trim(a);
        trim(b);
        while (!b.empty()) {
            QPoly r = rational_remainder(a, b, nullptr);
            a = std::move(b);
            b = std::move(r);
        }
        return a;
    }

    static QPoly rational_divide(QPoly const & a, QPoly const & b) {
        QPoly q;
        rational_remainder(a, b, &q);
        return q;
    }

    std::vector<mpz_class> c_;
};

/// Polynomial whose coefficients are p-adic numbers of one ring.
class PadicPolynomial {
  public:
    explicit PadicPolynomial(std::vector<PadicNumber> coeffs) : c_(std::move(coeffs)) {
        while (!c_.empty() && c_.back().is_exact_zero()) c_.pop_back();
        if (c_.empty()) throw domain_error("zero polynomial");
        if (c_.back().is_zero()) throw precision_exhausted("leading coefficient vanishes at stored precision");
        unify();
    }

    static PadicPolynomial from_integer_polynomial(IntegerPolynomial const & f, RingPtr const & ring, long precision) {
        std::vector<PadicNumber> c;
        for (auto const & a : f.coefficients()) c.push_back(PadicNumber::from_integer(a, ring, precision));
        return PadicPolynomial(std::move(c));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    std::vector<PadicNumber> const & coefficients() const { return c_; }
    PadicNumber const & coeff(int i) const { return c_[i]; }
    RingPtr const & ring() const { return c_.back().ring(); }
    u64 prime() const { return c_.back().prime(); }

    PadicNumber eval(PadicNumber const & x) const {
        PadicNumber r = PadicNumber::zero(ring());
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
        return r;
    }

    PadicPolynomial derivative() const {
        if (degree() < 1) throw domain_error("derivative of a constant");
        std::vector<PadicNumber> d;
        for (int i = 1; i <= degree(); ++i) {
            long const prec = std::max(1L, c_[i].relative_precision());
            d.push_back(c_[i] * PadicNumber::from_integer(i, ring(), prec));
        }
        while (d.size() > 1 && d.back().is_exact_zero()) d.pop_back();
        return PadicPolynomial(std::move(d));
    }

    PadicPolynomial embed(RingPtr const & target) const {
        std::vector<PadicNumber> c;
        for (auto const & a : c_) c.push_back(a.embed(target));
        return PadicPolynomial(std::move(c));
    }

  private:
    void unify() {
        int f = 1;
        for (auto const & a : c_) f = std::lcm(f, a.degree());
        long need = 1;
        for (auto const & a : c_) need = std::max(need, a.relative_precision());
        RingPtr const target = unramified_ring(prime(), f, need);
        for (auto & a : c_) a = a.embed(target);
    }

    std::vector<PadicNumber> c_;
};

/// Lower convex hull of the points (i, ord c_i).
class NewtonPolygon {
  public:
    struct Segment {
        mpq_class slope;
        long length;
    };

    /// From coefficient valuations (nullopt for zero coefficients).
    explicit NewtonPolygon(std::vector<std::optional<long>> const & vals) {
        std::vector<std::pair<long, long>> pts;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (vals[i]) pts.emplace_back(static_cast<long>(i), *vals[i]);
        }
        if (pts.empty()) throw domain_error("Newton polygon of the zero polynomial");
        zero_roots_ = pts.front().first;
        degree_ = pts.back().first;
        std::vector<std::pair<long, long>> hull;
        for (auto const & pt : pts) {
            while (hull.size() >= 2) {
                auto const & a = hull[hull.size() - 2];
                auto const & b = hull.back();
                i128 const cross = static_cast<i128>(b.first - a.first) * (pt.second - a.second) -
                                   static_cast<i128>(b.second - a.second) * (pt.first - a.first);
                if (cross > 0) break;
                hull.pop_back();
            }
            hull.push_back(pt);
        }
        for (std::size_t i = 1; i < hull.size(); ++i) {
            long const dx = hull[i].first - hull[i - 1].first;
            mpq_class slope(hull[i].second - hull[i - 1].second, dx);
            slope.canonicalize();
            segments_.push_back({slope, dx});
        }
    }

    std::vector<Segment> const & segments() const { return segments_; }
    long zero_multiplicity() const { return zero_roots_; }
    long degree() const { return degree_; }

    /// (valuation, multiplicity) of the nonzero roots, valuations decreasing.
    std::vector<std::pair<mpq_class, long>> root_valuations() const {
        std::vector<std::pair<mpq_class, long>> out;
        for (auto const & s : segments_) out.emplace_back(-s.slope, s.length);
        return out;
    }

    /// Largest valuation of a nonzero root.
    mpq_class max_root_valuation() const {
        if (segments_.empty()) throw domain_error("no nonzero roots");
        return -segments_.front().slope;
    }

    /// Sum of nonzero root valuations counted with multiplicity.
    mpq_class valuation_sum() const {
        mpq_class s = 0;
        for (auto const & seg : segments_) s -= seg.slope * seg.length;
        return s;
    }

  private:
    std::vector<Segment> segments_;
    long zero_roots_ = 0;
    long degree_ = 0;
};

inline NewtonPolygon newton_polygon(IntegerPolynomial const & f, u64 p) {
    std::vector<std::optional<long>> vals;
    for (auto const & c : f.coefficients()) {
        vals.push_back(c == 0 ? std::nullopt : std::optional<long>(valuation(c, p)));
    }
    return NewtonPolygon(vals);
}

inline NewtonPolygon newton_polygon(PadicPolynomial const & f) {
    std::vector<std::optional<long>> vals;
    for (auto const & c : f.coefficients()) {
        if (c.is_exact_zero()) {
            vals.push_back(std::nullopt);
        } else {
            vals.push_back(c.valuation());
        }
    }
    return NewtonPolygon(vals);
}

}  // namespace singmod
