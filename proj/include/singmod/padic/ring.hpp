#pragma once

// The unramified extension of Z_p of degree f, presented as Z_p[z]/(g)
// where g is the minimal polynomial of the Teichmuller lift of a root of
// a fixed irreducible C over F_p. With this choice Frobenius is z -> z^p.
// Elements are coordinate vectors in the basis 1, z, ..., z^(f-1), always
// handled modulo an explicit power p^k.

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <utility>
#include <vector>

#include "singmod/core/arith.hpp"
#include "singmod/core/errors.hpp"
#include "singmod/padic/finite_field.hpp"

namespace singmod {

using Coords = std::vector<mpz_class>;

class UnramifiedRing {
  public:
    using Elem = ff::FiniteField::Elem;

    UnramifiedRing(u64 p, int f, long cap)
        : p_(p), f_(f), cap_(cap), field_(p, ff::first_irreducible(p, f)) {
        if (p < 2 || !is_prime(p)) throw domain_error("unramified ring needs a prime");
        if (p >= (1ULL << 31)) throw domain_error("prime too large for residue arithmetic");
        ppow_.resize(cap_ + 1);
        ppow_[0] = 1;
        for (long i = 1; i <= cap_; ++i) ppow_[i] = ppow_[i - 1] * static_cast<unsigned long>(p_);

        // Teichmuller lift of t in (Z/p^cap)[t]/(C), then its minimal polynomial.
        Coords lifted_c(f_);
        for (int i = 0; i < f_; ++i) lifted_c[i] = static_cast<unsigned long>(field_.modulus()[i]);
        modulus_ = lifted_c;
        Coords const omega = teichmuller(field_.generator(), cap_);
        std::vector<Coords> powers{one()};
        for (int i = 1; i <= f_; ++i) powers.push_back(mul(powers.back(), omega, cap_));
        modulus_ = solve_modulus(powers);

        Coords zeta(f_, 0);
        if (f_ > 1) {
            zeta[1] = 1;
        } else {
            zeta[0] = reduce_scalar(-modulus_[0], cap_);
        }
        Coords const zp = pow(zeta, mpz_class(p_), cap_);
        frobenius_columns_.push_back(one());
        for (int i = 1; i < f_; ++i) frobenius_columns_.push_back(mul(frobenius_columns_.back(), zp, cap_));
    }

    u64 prime() const { return p_; }
    int degree() const { return f_; }
    long cap() const { return cap_; }
    ff::FiniteField const & residue_field() const { return field_; }
    Coords const & modulus() const { return modulus_; }

    mpz_class const & ppow(long k) const {
        if (k < 0 || k > cap_) throw precision_exhausted("precision beyond ring cap");
        return ppow_[k];
    }

    Coords zero() const { return Coords(f_, 0); }
    Coords one() const {
        Coords r = zero();
        r[0] = 1;
        return r;
    }

    mpz_class reduce_scalar(mpz_class const & a, long k) const {
        mpz_class r;
        mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), ppow(k).get_mpz_t());
        return r;
    }

    Coords reduce(Coords a, long k) const {
        for (auto & c : a) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), ppow(k).get_mpz_t());
        return a;
    }

    Coords add(Coords const & a, Coords const & b, long k) const {
        Coords r(f_);
        for (int i = 0; i < f_; ++i) r[i] = a[i] + b[i];
        return reduce(std::move(r), k);
    }

    Coords sub(Coords const & a, Coords const & b, long k) const {
        Coords r(f_);
        for (int i = 0; i < f_; ++i) r[i] = a[i] - b[i];
        return reduce(std::move(r), k);
    }

    Coords scale(Coords const & a, mpz_class const & c, long k) const {
        Coords r(f_);
        for (int i = 0; i < f_; ++i) r[i] = a[i] * c;
        return reduce(std::move(r), k);
    }

    Coords mul(Coords const & a, Coords const & b, long k) const {
        Coords prod(2 * f_ - 1, 0);
        for (int i = 0; i < f_; ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; j < f_; ++j) mpz_addmul(prod[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
        }
        for (int top = 2 * f_ - 2; top >= f_; --top) {
            mpz_class const c = prod[top];
            if (c == 0) continue;
            for (int i = 0; i < f_; ++i) mpz_submul(prod[top - f_ + i].get_mpz_t(), c.get_mpz_t(), modulus_[i].get_mpz_t());
        }
        prod.resize(f_);
        return reduce(std::move(prod), k);
    }

    Coords pow(Coords base, mpz_class const & e, long k) const {
        Coords r = reduce(one(), k);
        for (long i = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; i >= 0; --i) {
            r = mul(r, r, k);
            if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) r = mul(r, base, k);
        }
        return r;
    }

    /// Smallest coordinate valuation, or k when a vanishes modulo p^k.
    long valuation(Coords const & a, long k) const {
        long v = k;
        for (auto const & c : a) {
            mpz_class r = reduce_scalar(c, k);
            if (r == 0) continue;
            v = std::min(v, singmod::valuation(r, p_));
        }
        return v;
    }

    bool is_zero(Coords const & a, long k) const { return valuation(a, k) >= k; }

    Elem residue(Coords const & a) const {
        Elem e(f_);
        for (int i = 0; i < f_; ++i) e[i] = mod_reduce(a[i], p_);
        return e;
    }

    Coords lift(Elem const & e) const {
        Coords r(f_);
        for (int i = 0; i < f_; ++i) r[i] = static_cast<unsigned long>(e[i]);
        return r;
    }

    /// Inverse of a unit modulo p^k by Newton iteration from the residue inverse.
    Coords inverse(Coords const & a, long k) const {
        Elem const r = residue(a);
        if (field_.is_zero(r)) throw domain_error("inverse of a non-unit");
        Coords y = lift(field_.inv(r));
        for (long j = 1; j < k;) {
            j = std::min(2 * j, k);
            Coords const ay = mul(a, y, j);
            Coords two_minus = sub(scale(one(), 2, j), ay, j);
            y = mul(y, two_minus, j);
        }
        return reduce(std::move(y), k);
    }

    Coords frobenius(Coords const & a, long k) const {
        Coords r = zero();
        for (int i = 0; i < f_; ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; j < f_; ++j) mpz_addmul(r[j].get_mpz_t(), a[i].get_mpz_t(), frobenius_columns_[i][j].get_mpz_t());
        }
        return reduce(std::move(r), k);
    }

    /// Teichmuller representative of a residue class, modulo p^k.
    Coords teichmuller(Elem const & r, long k) const {
        if (field_.is_zero(r)) return zero();
        mpz_class const q = field_.order();
        Coords y = lift(r);
        for (long j = 1; j < k;) {
            j = std::min(2 * j, k);
            Coords const z = pow(y, q - 2, j);
            Coords const w = mul(z, y, j);
            Coords const num = sub(w, one(), j);
            Coords const den = scale(z, q - 1, j);
            y = sub(y, mul(num, inverse(den, j), j), j);
        }
        return reduce(std::move(y), k);
    }

  private:
    // Solves sum_{i<f} g_i w^i = -w^f. The matrix of the w^i is the identity
    // modulo p, so elimination only meets unit pivots.
    Coords solve_modulus(std::vector<Coords> const & powers) const {
        long const k = cap_;
        std::vector<Coords> m(f_, Coords(f_ + 1));
        for (int row = 0; row < f_; ++row) {
            for (int col = 0; col < f_; ++col) m[row][col] = powers[col][row];
            m[row][f_] = reduce_scalar(-powers[f_][row], k);
        }
        for (int col = 0; col < f_; ++col) {
            mpz_class inv;
            mpz_invert(inv.get_mpz_t(), m[col][col].get_mpz_t(), ppow(k).get_mpz_t());
            for (auto & c : m[col]) c = reduce_scalar(c * inv, k);
            for (int row = 0; row < f_; ++row) {
                if (row == col || m[row][col] == 0) continue;
                mpz_class const factor = m[row][col];
                for (int c = 0; c <= f_; ++c) m[row][c] = reduce_scalar(m[row][c] - factor * m[col][c], k);
            }
        }
        Coords g(f_);
        for (int i = 0; i < f_; ++i) g[i] = m[i][f_];
        return g;
    }

    u64 p_;
    int f_;
    long cap_;
    ff::FiniteField field_;
    std::vector<mpz_class> ppow_;
    Coords modulus_;
    std::vector<Coords> frobenius_columns_;
};

using RingPtr = std::shared_ptr<UnramifiedRing const>;

inline constexpr long default_ring_cap = 64;

/// Shared ring of degree f over Z_p whose precision cap is at least min_cap.
/// Rings for the same (p, f) with different caps agree modulo the smaller cap.
inline RingPtr unramified_ring(u64 p, int f, long min_cap = 0) {
    static std::mutex lock;
    static std::map<std::pair<u64, int>, RingPtr> registry;
    if (f < 1) throw domain_error("residue degree must be positive");
    std::lock_guard guard(lock);
    auto & slot = registry[{p, f}];
    if (!slot || slot->cap() < min_cap) {
        long cap = std::max(default_ring_cap, min_cap);
        if (slot) cap = std::max(cap, 2 * slot->cap());
        slot = std::make_shared<UnramifiedRing const>(p, f, cap);
    }
    return slot;
}

/// Frobenius-equivariant embedding R_a -> R_b for a | b. The image of the
/// generator is the Teichmuller root of g_a whose residue is the smallest
/// root of C_a in F_{q_b}.
class RingEmbedding {
  public:
    RingEmbedding(RingPtr from, RingPtr to) : from_(std::move(from)), to_(std::move(to)) {
        if (from_->prime() != to_->prime() || to_->degree() % from_->degree() != 0) {
            throw domain_error("no embedding between these rings");
        }
        precision_ = std::min(from_->cap(), to_->cap());
        auto const & kb = to_->residue_field();
        ff::FqPolyRing ring(kb);
        ff::FqPolyRing::Poly ca;
        for (u64 c : from_->residue_field().modulus()) ca.push_back(kb.constant(c));
        auto const roots = ring.roots(ca);
        if (roots.empty()) throw error("residue modulus has no root in the larger field");
        Coords const eta = to_->teichmuller(roots.front(), precision_);
        images_.push_back(to_->reduce(to_->one(), precision_));
        for (int i = 1; i < from_->degree(); ++i) images_.push_back(to_->mul(images_.back(), eta, precision_));
    }

    RingPtr const & from() const { return from_; }
    RingPtr const & to() const { return to_; }
    long precision() const { return precision_; }

    Coords apply(Coords const & a, long k) const {
        if (k > precision_) throw precision_exhausted("embedding precision too small");
        Coords r = to_->zero();
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; j < to_->degree(); ++j) mpz_addmul(r[j].get_mpz_t(), a[i].get_mpz_t(), images_[i][j].get_mpz_t());
        }
        return to_->reduce(std::move(r), k);
    }

  private:
    RingPtr from_, to_;
    long precision_;
    std::vector<Coords> images_;
};

inline std::shared_ptr<RingEmbedding const> ring_embedding(RingPtr const & from, RingPtr const & to) {
    static std::mutex lock;
    static std::map<std::pair<UnramifiedRing const *, UnramifiedRing const *>, std::shared_ptr<RingEmbedding const>> cache;
    std::lock_guard guard(lock);
    auto & slot = cache[{from.get(), to.get()}];
    if (!slot) slot = std::make_shared<RingEmbedding const>(from, to);
    return slot;
}

}  // namespace singmod
