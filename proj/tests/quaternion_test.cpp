#include <gtest/gtest.h>

#include <set>
#include <utility>

#include "singmod/quaternion/order.hpp"

using namespace singmod;

namespace {

EisensteinNumber const theta = EisensteinNumber::theta();

QuaternionElement q(EisensteinNumber a, EisensteinNumber b, u64 p = 5) { return {std::move(a), std::move(b), p}; }

// All g * w with w in O_K, |coordinates of w| <= R, keyed by the coordinates.
std::set<std::pair<mpq_class, mpq_class>> lattice_points(EisensteinNumber const & g, long R) {
    std::set<std::pair<mpq_class, mpq_class>> out;
    for (long a = -R; a <= R; ++a) {
        for (long b = -R; b <= R; ++b) {
            EisensteinNumber const w = g * EisensteinNumber(a, b);
            out.emplace(w.u, w.v);
        }
    }
    return out;
}

}  // namespace

TEST(Eisenstein, Arithmetic) {
    EXPECT_EQ(theta * theta, theta - EisensteinNumber(1));
    EXPECT_EQ(theta + theta.conj(), EisensteinNumber(1));
    EXPECT_EQ(theta * theta.conj(), EisensteinNumber(1));
    EisensteinNumber const s = EisensteinNumber::sqrt_minus_3();
    EXPECT_EQ(s * s, EisensteinNumber(-3));
    EXPECT_EQ((EisensteinNumber(2) + s) * (EisensteinNumber(2) - s), EisensteinNumber(7));
    EisensteinNumber const a(mpq_class(3, 7), mpq_class(-2, 5));
    EXPECT_EQ((a / (theta + EisensteinNumber(4))) * (theta + EisensteinNumber(4)), a);
}

TEST(Quaternion, MultiplicationExamples) {
    for (u64 p : {5, 11, 17}) {
        QuaternionElement const x = q(EisensteinNumber(mpq_class(1, 3), 2), EisensteinNumber(-1, mpq_class(5, 7)), p);
        QuaternionElement const one = QuaternionElement::scalar(1, p);
        QuaternionElement const u = QuaternionElement::u_element(p);
        EXPECT_EQ(one * x, x);
        EXPECT_EQ(x * one, x);
        EXPECT_EQ(u * u, QuaternionElement::scalar(-7 * static_cast<long>(p), p));
        EXPECT_EQ(u * QuaternionElement::scalar(theta, p), q(0, theta.conj(), p));
        EXPECT_EQ(u * QuaternionElement::scalar(theta, p), QuaternionElement::scalar(theta.conj(), p) * u);
    }
}

TEST(Quaternion, TraceAndNorm) {
    QuaternionElement const one = QuaternionElement::scalar(1, 5);
    EXPECT_EQ(one.reduced_trace(), 2);
    EXPECT_EQ(one.reduced_norm(), 1);
    EXPECT_EQ(QuaternionElement::u_element(5).reduced_norm(), 35);
    EXPECT_EQ(QuaternionElement::u_element(11).reduced_norm(), 77);
    EXPECT_EQ(construct_phi(1, 1, 5).phi.reduced_trace(), 1);
}

TEST(Quaternion, MatrixRendering) {
    Rng rng(31);
    for (int i = 0; i < 200; ++i) {
        u64 const p = i % 2 ? 5 : 11;
        QuaternionElement const x = random_quaternion(rng, p, 21, 40), y = random_quaternion(rng, p, 21, 40);
        auto const m = x.to_matrix();
        EXPECT_EQ(m[0] + m[3], EisensteinNumber(x.reduced_trace(), 0));
        EXPECT_EQ(m[0] * m[3] - m[1] * m[2], EisensteinNumber(x.reduced_norm(), 0));
        // The product matches the 2x2 matrix product over K.
        auto const n = y.to_matrix(), xy = (x * y).to_matrix();
        EXPECT_EQ(xy[0], m[0] * n[0] + m[1] * n[2]);
        EXPECT_EQ(xy[1], m[0] * n[1] + m[1] * n[3]);
        EXPECT_EQ(xy[2], m[2] * n[0] + m[3] * n[2]);
        EXPECT_EQ(xy[3], m[2] * n[1] + m[3] * n[3]);
    }
}

TEST(Quaternion, RingAxiomsAndCharacteristicIdentity) {
    Rng rng(32);
    for (int i = 0; i < 500; ++i) {
        u64 const p = i % 2 ? 5 : 11;
        auto const x = random_quaternion(rng, p, 21, 50), y = random_quaternion(rng, p, 6, 50), z = random_quaternion(rng, p, 7, 50);
        EXPECT_EQ((x * y) * z, x * (y * z));
        EXPECT_EQ(x * (y + z), x * y + x * z);
        EXPECT_EQ((x + y) * z, x * z + y * z);
        QuaternionElement const chi =
            x * x - x.reduced_trace() * x + QuaternionElement::scalar(EisensteinNumber(x.reduced_norm(), 0), p);
        EXPECT_TRUE(chi.is_zero());
        EXPECT_EQ(x * x.conjugate(), QuaternionElement::scalar(EisensteinNumber(x.reduced_norm(), 0), p));
    }
}

TEST(Quaternion, NormMultiplicative) {
    Rng rng(33);
    for (int i = 0; i < 500; ++i) {
        u64 const p = i % 2 ? 17 : 23;
        auto const x = random_quaternion(rng, p, 21, 60), y = random_quaternion(rng, p, 21, 60);
        EXPECT_EQ((x * y).reduced_norm(), x.reduced_norm() * y.reduced_norm());
        if (!x.is_zero()) {
            EXPECT_GT(x.reduced_norm(), 0);
        }
    }
}

TEST(Order, IdealPredicatesAgainstLattices) {
    EisensteinNumber const s = EisensteinNumber::sqrt_minus_3();
    EisensteinNumber const inv_d = EisensteinNumber(1) / s;
    EisensteinNumber const inv_qd = EisensteinNumber(1) / ((EisensteinNumber(2) + s) * s);
    auto const D = lattice_points(inv_d, 200);
    auto const QD = lattice_points(inv_qd, 200);
    int hits_d = 0, hits_qd = 0;
    for (long a = -30; a <= 30; ++a) {
        for (long b = -30; b <= 30; ++b) {
            EisensteinNumber const x(mpq_class(a, 21), mpq_class(b, 21));
            bool const in_d = D.count({x.u, x.v}) > 0;
            bool const in_qd = QD.count({x.u, x.v}) > 0;
            EXPECT_EQ(in_inverse_different(x), in_d) << x.to_string();
            EXPECT_EQ(in_inverse_q_different(x), in_qd) << x.to_string();
            hits_d += in_d;
            hits_qd += in_qd;
        }
    }
    EXPECT_GT(hits_d, 0);
    EXPECT_GT(hits_qd, hits_d);
}

TEST(Order, MembershipExamples) {
    auto const b = order_basis(5);
    EXPECT_EQ(b[2], q(EisensteinNumber(mpq_class(1, 3), mpq_class(-2, 3)), EisensteinNumber(mpq_class(4, 21), mpq_class(-5, 21))));
    EXPECT_TRUE(order_contains(b[2]));
    EXPECT_TRUE(order_contains(q(theta, 0)));
    EXPECT_FALSE(order_contains(q(EisensteinNumber(mpq_class(1, 2), 0), 0)));
    for (auto const & x : b) EXPECT_TRUE(order_contains(x));
    EXPECT_FALSE(order_contains(q(0, EisensteinNumber(mpq_class(1, 7), 0))));
    EXPECT_TRUE(order_contains(q(0, EisensteinNumber(3, -2) * EisensteinNumber(mpq_class(1, 7), 0))));
}

TEST(Order, ClosedUnderProducts) {
    for (u64 p : {5, 11, 17, 23}) {
        auto const b = order_basis(p);
        for (auto const & x : b) {
            for (auto const & y : b) EXPECT_TRUE(order_contains(x * y)) << p;
        }
    }
}

TEST(Order, GramMatrix) {
    for (u64 p : {5, 11, 17, 23, 29, 41}) {
        auto const g = gram_matrix(p);
        long const pl = static_cast<long>(p);
        mpq_class const expected[4][4] = {{6, 3, 2, 3}, {3, 1, 1, 1}, {2, 1, mpq_class((2 * pl + 2) / 3), pl + 1}, {3, 1, pl + 1, 2 * pl + 1}};
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) EXPECT_EQ(g.entries[i][j], -expected[i][j]) << p << " " << i << j;
        }
        EXPECT_EQ(g.det, -mpq_class(pl * pl));
        EXPECT_TRUE(is_integer(g.entries[2][2]));
    }
    EXPECT_THROW(gram_matrix(7), domain_error);
    EXPECT_THROW(gram_matrix(2), domain_error);
}

TEST(Order, MembershipMatchesBasisCoordinates) {
    Rng rng(34);
    int inside = 0;
    for (int i = 0; i < 2000; ++i) {
        u64 const p = i % 2 ? 5 : 11;
        QuaternionElement x = random_quaternion(rng, p, 21, 30);
        if (i % 3 == 0) {
            // Bias towards the order with random integer combinations of the basis.
            auto const b = order_basis(p);
            x = QuaternionElement::scalar(0, p);
            for (auto const & e : b) x = x + mpq_class(rng.uniform(-9, 9)) * e;
            if (rng.coin()) x = x + mpq_class(1, 2) * b[static_cast<std::size_t>(rng.uniform(0, 3))];
        }
        auto const c = basis_coordinates(x);
        bool const integral = is_integer(c[0]) && is_integer(c[1]) && is_integer(c[2]) && is_integer(c[3]);
        EXPECT_EQ(order_contains(x), integral) << x.to_string();
        inside += integral;
    }
    EXPECT_GT(inside, 300);
}

TEST(Phi, Examples) {
    auto const c = construct_phi(1, 1, 5);
    EXPECT_EQ(c.d, 503);
    EXPECT_TRUE(c.decomposition_ok);
    EXPECT_TRUE(c.quadratic_ok);
    EXPECT_EQ(c.phi.reduced_norm(), 126);
    EXPECT_EQ((c.phi * c.phi - c.phi + QuaternionElement::scalar(126, 5)), QuaternionElement::scalar(0, 5));
    auto const c0 = construct_phi(0, 1, 5);
    EXPECT_EQ(c0.d, 23);
    EXPECT_TRUE(c0.quadratic_ok);
    EXPECT_TRUE(c0.decomposition_ok);
    EXPECT_THROW(construct_phi(1, 2, 5), domain_error);
    EXPECT_THROW(construct_phi(-1, 1, 5), domain_error);
}

TEST(Phi, RandomCases) {
    Rng rng(35);
    for (int i = 0; i < 100; ++i) {
        u64 const p = i % 2 ? 5 : 11;
        long const n = rng.uniform(0, 5);
        long x = 2 * rng.uniform(0, 49) + 1;
        if (rng.coin()) x = -x;
        auto const c = construct_phi(n, x, p);
        EXPECT_TRUE(c.quadratic_ok);
        EXPECT_TRUE(c.decomposition_ok);
        EXPECT_EQ(4 * c.phi.reduced_norm(), 1 + c.d);
        EXPECT_EQ(c.phi.reduced_trace(), 1);
        mpz_class const r = (-c.d) % 4;
        EXPECT_TRUE(r == 1 || r == -3);
        // phi lies in O_K + p^n O but not in O_K + p^(n+1) O.
        EXPECT_FALSE(decompose_ok_plus_pn_order(c.phi, n + 1).has_value());
    }
}
