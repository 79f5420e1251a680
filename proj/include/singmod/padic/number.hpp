#pragma once

// Truncated elements of unramified extensions of Q_p with relative
// precision. A value is either an exact zero, a zero known only modulo
// p^A (what full cancellation produces), or p^v * u with u a unit known
// modulo p^N.

#include <gmpxx.h>

#include <climits>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "singmod/core/arith.hpp"
#include "singmod/core/errors.hpp"
#include "singmod/padic/ring.hpp"

namespace singmod {

/// A valuation in Q or +infinity.
struct ExtValuation {
    bool infinite = false;
    mpq_class value = 0;

    static ExtValuation infinity() { return {true, 0}; }

    std::string to_string() const { return infinite ? "inf" : singmod::to_string(value); }

    friend bool operator==(ExtValuation const & a, ExtValuation const & b) {
        return a.infinite == b.infinite && (a.infinite || a.value == b.value);
    }
};

class PadicNumber {
  public:
    enum class Kind { exact_zero, unresolved_zero, nonzero };

    PadicNumber() : PadicNumber(unramified_ring(2, 1)) {}

    /// Exact zero of the given ring.
    explicit PadicNumber(RingPtr ring) : ring_(std::move(ring)), kind_(Kind::exact_zero) {}

    static PadicNumber zero(RingPtr ring) { return PadicNumber(std::move(ring)); }

    /// Zero known only modulo p^precision.
    static PadicNumber unresolved_zero(RingPtr ring, long precision) {
        PadicNumber z(std::move(ring));
        z.kind_ = Kind::unresolved_zero;
        z.v_ = precision;
        return z;
    }

    /// n with relative precision N (exact zero when n = 0).
    static PadicNumber from_integer(mpz_class const & n, u64 p, long precision, int f = 1) {
        return from_integer(n, unramified_ring(p, f, precision), precision);
    }

    static PadicNumber from_integer(mpz_class const & n, RingPtr ring, long precision) {
        if (n == 0) return PadicNumber(std::move(ring));
        u64 const p = ring->prime();
        long const v = singmod::valuation(n, p);
        mpz_class u = n;
        for (long i = 0; i < v; ++i) mpz_divexact_ui(u.get_mpz_t(), u.get_mpz_t(), p);
        Coords c = ring->zero();
        c[0] = u;
        return make(std::move(ring), v, precision, std::move(c));
    }

    static PadicNumber from_rational(mpq_class const & q, u64 p, long precision, int f = 1) {
        return from_rational(q, unramified_ring(p, f, precision), precision);
    }

    static PadicNumber from_rational(mpq_class const & q, RingPtr ring, long precision) {
        if (q == 0) return PadicNumber(std::move(ring));
        PadicNumber const num = from_integer(q.get_num(), ring, precision);
        PadicNumber const den = from_integer(q.get_den(), ring, precision);
        return num / den;
    }

    /// Integral element given by coordinates modulo p^abs_precision.
    static PadicNumber from_coordinates(RingPtr ring, Coords coords, long abs_precision) {
        if (abs_precision < 1) return unresolved_zero(std::move(ring), std::max(0L, abs_precision));
        RingPtr r = ring->cap() >= abs_precision ? std::move(ring) : unramified_ring(ring->prime(), ring->degree(), abs_precision);
        coords = r->reduce(std::move(coords), abs_precision);
        long const v = r->valuation(coords, abs_precision);
        if (v >= abs_precision) return unresolved_zero(std::move(r), abs_precision);
        for (auto & c : coords) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), r->ppow(v).get_mpz_t());
        return make(std::move(r), v, abs_precision - v, std::move(coords));
    }

    /// Teichmuller lift of a residue-field element.
    static PadicNumber teichmuller(RingPtr ring, ff::FiniteField::Elem const & residue, long precision) {
        if (ring->residue_field().is_zero(residue)) return PadicNumber(std::move(ring));
        RingPtr r = unramified_ring(ring->prime(), ring->degree(), precision);
        return make(r, 0, precision, r->teichmuller(residue, precision));
    }

    RingPtr const & ring() const { return ring_; }
    u64 prime() const { return ring_->prime(); }
    int degree() const { return ring_->degree(); }
    Kind kind() const { return kind_; }

    bool is_exact_zero() const { return kind_ == Kind::exact_zero; }
    bool is_unresolved_zero() const { return kind_ == Kind::unresolved_zero; }
    bool is_zero() const { return kind_ != Kind::nonzero; }

    /// Valuation of a nonzero element.
    long valuation() const {
        if (kind_ == Kind::exact_zero) throw domain_error("valuation of exact zero is infinite");
        if (kind_ == Kind::unresolved_zero) throw precision_exhausted("valuation of zero known only to precision " + std::to_string(v_));
        return v_;
    }

    ExtValuation ord() const {
        if (kind_ == Kind::exact_zero) return ExtValuation::infinity();
        return {false, mpq_class(valuation())};
    }

    /// Certified lower bound for the valuation (LONG_MAX for exact zero).
    long ord_lower_bound() const { return kind_ == Kind::exact_zero ? LONG_MAX : v_; }

    long relative_precision() const { return kind_ == Kind::nonzero ? n_ : 0; }

    /// Digits known: the value is determined modulo p^absolute_precision().
    long absolute_precision() const {
        if (kind_ == Kind::exact_zero) return LONG_MAX;
        if (kind_ == Kind::unresolved_zero) return v_;
        return v_ + n_;
    }

    Coords const & unit() const { return unit_; }

    bool is_integral() const { return kind_ != Kind::nonzero || v_ >= 0; }

    /// Coordinates of an integral element modulo p^k, k <= absolute precision.
    Coords coordinates(long k) const {
        if (k > absolute_precision()) throw precision_exhausted("requested digits beyond precision");
        if (kind_ != Kind::nonzero) return ring_->zero();
        if (v_ < 0) throw domain_error("coordinates of a non-integral element");
        if (v_ >= k) return ring_->zero();
        RingPtr r = ring_for(k);
        return r->scale(unit_, r->ppow(v_), k);
    }

    ff::FiniteField::Elem residue() const { return ring_->residue(coordinates(1)); }

    PadicNumber operator-() const {
        if (kind_ != Kind::nonzero) return *this;
        return make(ring_, v_, n_, ring_->sub(ring_->zero(), unit_, n_));
    }

    friend PadicNumber operator+(PadicNumber const & a, PadicNumber const & b) {
        auto [x, y] = common(a, b);
        return x.add(y);
    }
    friend PadicNumber operator-(PadicNumber const & a, PadicNumber const & b) { return a + (-b); }

    friend PadicNumber operator*(PadicNumber const & a, PadicNumber const & b) {
        auto [x, y] = common(a, b);
        return x.mul(y);
    }

    friend PadicNumber operator/(PadicNumber const & a, PadicNumber const & b) { return a * b.inverse(); }

    PadicNumber & operator+=(PadicNumber const & b) { return *this = *this + b; }
    PadicNumber & operator-=(PadicNumber const & b) { return *this = *this - b; }
    PadicNumber & operator*=(PadicNumber const & b) { return *this = *this * b; }

    PadicNumber inverse() const {
        if (kind_ == Kind::exact_zero) throw domain_error("division by exact zero");
        if (kind_ == Kind::unresolved_zero) throw precision_exhausted("division by a zero of unknown valuation");
        return make(ring_, -v_, n_, ring_->inverse(unit_, n_));
    }

    PadicNumber pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        PadicNumber result = one_like(*this);
        PadicNumber base = *this;
        while (e) {
            if (e & 1) result = result * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return result;
    }

    /// The p-power Frobenius applied `times` times.
    PadicNumber frobenius(long times = 1) const {
        if (kind_ != Kind::nonzero) return *this;
        times %= ring_->degree();
        if (times < 0) times += ring_->degree();
        Coords u = unit_;
        for (long i = 0; i < times; ++i) u = ring_->frobenius(u, n_);
        return make(ring_, v_, n_, std::move(u));
    }

    /// Image in a ring whose degree is a multiple of this one.
    PadicNumber embed(RingPtr const & target) const {
        if (target->degree() == ring_->degree()) {
            if (target.get() == ring_.get()) return *this;
            PadicNumber r = *this;
            r.ring_ = target->cap() >= ring_->cap() ? target : ring_;
            return r;
        }
        if (kind_ != Kind::nonzero) {
            PadicNumber z = *this;
            z.ring_ = target;
            return z;
        }
        RingPtr from = ring_for(n_);
        RingPtr to = target->cap() >= n_ ? target : unramified_ring(target->prime(), target->degree(), n_);
        auto const emb = ring_embedding(from, to);
        return make(to, v_, n_, emb->apply(unit_, n_));
    }

    /// Same value with absolute precision lowered to at most k.
    PadicNumber truncated(long k) const {
        if (kind_ == Kind::exact_zero) return *this;
        if (k >= absolute_precision()) return *this;
        if (kind_ == Kind::unresolved_zero || k <= v_) return unresolved_zero(ring_, std::min(k, v_));
        return make(ring_, v_, k - v_, ring_->reduce(unit_, k - v_));
    }

    /// Same value with the unit padded by zero digits to relative precision N.
    /// Only meaningful when the stored digits are known to be exact.
    PadicNumber padded(long n) const {
        if (kind_ != Kind::nonzero || n <= n_) return *this;
        RingPtr r = ring_for(n);
        return make(r, v_, n, unit_);
    }

    /// Equality of all digits both operands know.
    bool agrees_with(PadicNumber const & other) const {
        PadicNumber const d = *this - other;
        return d.is_zero();
    }

    /// Rendering p^v * (d_0 + d_1*p + ... + O(p^N)); for f > 1 each digit
    /// is the tuple of basis coordinates.
    std::string to_string() const {
        std::ostringstream os;
        u64 const p = prime();
        if (kind_ == Kind::exact_zero) return "0";
        if (kind_ == Kind::unresolved_zero) {
            os << "O(" << p << "^" << v_ << ")";
            return os.str();
        }
        os << p << "^" << v_ << " * (";
        Coords rest = unit_;
        for (long i = 0; i < n_; ++i) {
            if (i) os << " + ";
            std::string digit;
            for (int j = 0; j < degree(); ++j) {
                mpz_class d;
                mpz_fdiv_qr_ui(rest[j].get_mpz_t(), d.get_mpz_t(), rest[j].get_mpz_t(), p);
                digit += (j ? "," : "") + d.get_str();
            }
            if (degree() > 1) digit = "(" + digit + ")";
            os << digit;
            if (i == 1) os << "*" << p;
            if (i > 1) os << "*" << p << "^" << i;
        }
        os << " + O(" << p << "^" << n_ << "))";
        return os.str();
    }

    static PadicNumber one_like(PadicNumber const & x) {
        long const n = x.kind_ == Kind::nonzero ? x.n_ : std::max(1L, x.v_);
        return make(x.ring_for(n), 0, n, x.ring_for(n)->one());
    }

  private:
    static PadicNumber make(RingPtr ring, long v, long n, Coords unit) {
        if (n < 1) return unresolved_zero(std::move(ring), v);
        if (ring->cap() < n) ring = unramified_ring(ring->prime(), ring->degree(), n);
        PadicNumber x(std::move(ring));
        x.kind_ = Kind::nonzero;
        x.v_ = v;
        x.n_ = n;
        x.unit_ = x.ring_->reduce(std::move(unit), n);
        if (x.ring_->residue_field().is_zero(x.ring_->residue(x.unit_))) throw error("internal: unit part is not a unit");
        return x;
    }

    RingPtr ring_for(long k) const {
        return ring_->cap() >= k ? ring_ : unramified_ring(ring_->prime(), ring_->degree(), k);
    }

    // Brings both operands into one ring, embedding into the compositum degree.
    static std::pair<PadicNumber, PadicNumber> common(PadicNumber const & a, PadicNumber const & b) {
        if (a.prime() != b.prime()) throw domain_error("p-adic numbers for different primes");
        if (a.ring_.get() == b.ring_.get()) return {a, b};
        int const fa = a.degree(), fb = b.degree();
        if (fa == fb) {
            RingPtr const & r = a.ring_->cap() >= b.ring_->cap() ? a.ring_ : b.ring_;
            return {a.embed(r), b.embed(r)};
        }
        int const f = std::lcm(fa, fb);
        long const need = std::max(a.relative_precision(), b.relative_precision());
        RingPtr const target = unramified_ring(a.prime(), f, need);
        return {a.embed(target), b.embed(target)};
    }

    PadicNumber add(PadicNumber const & b) const {
        if (kind_ == Kind::exact_zero) return b;
        if (b.kind_ == Kind::exact_zero) return *this;
        long const abs = std::min(absolute_precision(), b.absolute_precision());
        long const m = std::min(ord_lower_bound(), b.ord_lower_bound());
        if (abs <= m) return unresolved_zero(ring_, abs);
        long const k = abs - m;
        RingPtr const r = ring_for(k);
        Coords s = r->zero();
        for (PadicNumber const * x : {this, &b}) {
            if (x->kind_ != Kind::nonzero || x->v_ >= abs) continue;
            s = r->add(s, r->scale(x->unit_, r->ppow(x->v_ - m), k), k);
        }
        long const w = r->valuation(s, k);
        if (w >= k) return unresolved_zero(r, abs);
        for (auto & c : s) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), r->ppow(w).get_mpz_t());
        return make(r, m + w, k - w, std::move(s));
    }

    PadicNumber mul(PadicNumber const & b) const {
        if (kind_ == Kind::exact_zero || b.kind_ == Kind::exact_zero) return PadicNumber(ring_);
        if (kind_ == Kind::unresolved_zero || b.kind_ == Kind::unresolved_zero) {
            return unresolved_zero(ring_, v_ + b.v_);
        }
        long const n = std::min(n_, b.n_);
        RingPtr const r = ring_for(n);
        return make(r, v_ + b.v_, n, r->mul(unit_, b.unit_, n));
    }

    RingPtr ring_;
    Kind kind_;
    long v_ = 0;
    long n_ = 0;
    Coords unit_;
};

}  // namespace singmod
