#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "singmod/core/rng.hpp"
#include "singmod/modular/distance.hpp"
#include "singmod/modular/hecke.hpp"
#include "singmod/modular/modpoly.hpp"
#include "singmod/modular/rigidity.hpp"

using namespace singmod;

namespace {

std::string table_text(int n) {
    std::ifstream in(default_table_dir() + "/phi_" + std::to_string(n) + ".txt");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

MPoly random_poly(Rng & rng, int nvars, int degree, u64 p, int terms) {
    MPoly f(nvars);
    for (int t = 0; t < terms; ++t) {
        Monomial m(nvars, 0);
        int left = static_cast<int>(rng.uniform(0, degree));
        for (int i = 0; i < nvars && left > 0; ++i) {
            int const e = static_cast<int>(rng.uniform(0, left));
            m[i] = e;
            left -= e;
        }
        mpz_class c = static_cast<long>(rng.uniform(-20, 20));
        c *= power(static_cast<long>(p), static_cast<unsigned long>(rng.uniform(0, 3)));
        f = f + MPoly::term(m, c);
    }
    return f;
}

std::vector<mpq_class> random_point(Rng & rng, int nvars, u64 p) {
    std::vector<mpq_class> x;
    for (int i = 0; i < nvars; ++i) {
        mpz_class v = static_cast<long>(rng.uniform(-50, 50));
        v *= power(static_cast<long>(p), static_cast<unsigned long>(rng.uniform(0, 4)));
        x.emplace_back(v);
    }
    return x;
}

}  // namespace

TEST(Psi, Values) {
    EXPECT_EQ(psi(1), 1u);
    EXPECT_EQ(psi(2), 3u);
    EXPECT_EQ(psi(6), 12u);
    for (u64 ell : primes_up_to(13)) {
        u64 q = 1;
        for (int k = 1; k <= 4; ++k) {
            q *= ell;
            EXPECT_EQ(psi(q), q / ell * (ell + 1)) << ell << "^" << k;
        }
    }
    EXPECT_THROW(psi(0), domain_error);
}

TEST(ModularPoly, Level1And2) {
    auto const & phi1 = modular_poly(1);
    EXPECT_EQ(phi1.coeff(1, 0), 1);
    EXPECT_EQ(phi1.coeff(0, 1), -1);
    EXPECT_EQ(phi1.degree_x(), 1);
    auto const & phi2 = modular_poly(2);
    EXPECT_EQ(phi2.degree_x(), 3);
    EXPECT_EQ(phi2.degree_y(), 3);
    EXPECT_THROW(modular_poly(4), domain_error);
    // Phi_2(0, Y) = (Y - 54000)^3, j = 54000 being the singular modulus of
    // discriminant -12.
    EXPECT_EQ(phi2.in_y(0), IntegerPolynomial::from_roots({54000, 54000, 54000}));
}

TEST(ModularPoly, NumericalIdentityAtOnePointOneI) {
    mpfr_prec_t const prec = 512;
    mp::Complex const tau(mp::Real(prec, 0L), mp::Real(prec, "1.1"));
    auto const & phi2 = modular_poly(2);
    mp::Complex const j1 = j_invariant(tau), j2 = j_invariant(tau.scaled(2));
    mp::Real const rel = phi2.eval(j1, j2).norm() / phi2.abs_eval(j1.norm(), j2.norm());
    EXPECT_LT(rel.to_double(), 1e-10);
}

TEST(ModularPoly, TablesValidate) {
    for (int n : supported_levels()) {
        auto const & phi = modular_poly(n);
        int const d = static_cast<int>(psi(n));
        EXPECT_EQ(phi.degree_x(), d);
        EXPECT_EQ(phi.degree_y(), d);
        for (int i = 0; i <= d; ++i) {
            for (int j = 0; j <= d && n > 1; ++j) EXPECT_EQ(phi.coeff(i, j), phi.coeff(j, i));
        }
    }
}

TEST(ModularPoly, CorruptTablesAreRejected) {
    std::string text = table_text(3);
    // Perturb the last digit of one coefficient.
    auto const pos = text.find('\n', text.find('\n') + 1) - 1;
    text[pos] = text[pos] == '1' ? '2' : '1';
    try {
        parse_modular_polynomial(3, text);
        FAIL() << "perturbed Phi_3 accepted";
    } catch (validation_error const & e) {
        EXPECT_EQ(e.invariant(), "modular-identity");
    }
    try {
        parse_modular_polynomial(2, table_text(2) + "1 2 5\n");
        FAIL();
    } catch (validation_error const & e) {
        EXPECT_EQ(e.invariant(), "symmetry");
    }
    try {
        parse_modular_polynomial(2, table_text(2) + "4 0 1\n");
        FAIL();
    } catch (validation_error const & e) {
        EXPECT_EQ(e.invariant(), "bidegree");
    }
    try {
        parse_modular_polynomial(2, "1 1 x\n");
        FAIL();
    } catch (validation_error const & e) {
        EXPECT_EQ(e.invariant(), "integer-coefficients");
    }
}

TEST(ModularPoly, VanishesAtIsogenousSingularModuli) {
    // j(sqrt(-7)) has discriminant -28; it is 2-isogenous to j of -7.
    mpz_class const j7 = hilbert_class_poly(-7).coeff(0) * -1;
    mpz_class const j28 = hilbert_class_poly(-28).coeff(0) * -1;
    EXPECT_EQ(modular_poly(2).eval(j7, j28), 0);
    EXPECT_NE(modular_poly(3).eval(j7, j28), 0);
}

TEST(Distance, Examples) {
    u64 const p = 5;
    IdealPresentation const z0{1, {MPoly::variable(1, 0)}};
    EXPECT_EQ(distance({mpq_class(25)}, z0, p), PadicAbs::of_valuation(p, 2));
    EXPECT_TRUE(distance({mpq_class(0)}, z0, p).is_zero());
    // Zero set of X1 (X2 - 1) and X2 - 1 contains (7, 1).
    MPoly const x1 = MPoly::variable(2, 0), x2 = MPoly::variable(2, 1), one = MPoly::constant(2, 1);
    IdealPresentation const line{2, {x1 * (x2 - one), x2 - one}};
    EXPECT_TRUE(distance({mpq_class(7), mpq_class(1)}, line, p).is_zero());
    EXPECT_THROW(distance({mpq_class(1, 5)}, z0, p), domain_error);
    IdealPresentation const bad{1, {MPoly::constant(1, mpq_class(1, 5))}};
    EXPECT_THROW(distance({mpq_class(1)}, bad, p), domain_error);
}

TEST(Distance, PadicPoints) {
    u64 const p = 5;
    IdealPresentation const z0{1, {MPoly::variable(1, 0) - MPoly::constant(1, 1)}};
    PadicNumber const x = PadicNumber::from_integer(1 + 125, p, 20);
    EXPECT_EQ(distance({x}, z0), PadicAbs::of_valuation(p, 3));
    // x - 1 vanishes to the working precision: no decision.
    PadicNumber const one = PadicNumber::from_integer(1, p, 20);
    EXPECT_THROW(distance({one}, z0), precision_exhausted);
    // Another generator decides the maximum.
    IdealPresentation const two{1, {z0.generators[0], MPoly::constant(1, 5)}};
    EXPECT_EQ(distance({one}, two), PadicAbs::of_valuation(p, 1));
}

TEST(Distance, AtMostOneAndMonotone) {
    Rng rng(11);
    for (u64 p : {2, 3, 5}) {
        for (int trial = 0; trial < 200; ++trial) {
            int const n = static_cast<int>(rng.uniform(1, 3));
            IdealPresentation ideal{n, {}};
            auto const x = random_point(rng, n, p);
            PadicAbs prev = PadicAbs::zero(p);
            for (int k = 0; k < 4; ++k) {
                ideal.generators.push_back(random_poly(rng, n, 3, p, 3));
                PadicAbs const d = distance(x, ideal, p);
                EXPECT_LE(d.value(), 1.0);
                EXPECT_TRUE(prev <= d);
                prev = d;
            }
        }
    }
}

TEST(DistancePrime, Examples) {
    u64 const p = 7;
    IdealPresentation const z0{1, {MPoly::variable(1, 0)}};
    EXPECT_TRUE(distance_prime_upper({mpq_class(3)}, {{mpq_class(3)}}, p).is_zero());
    mpq_class const x = 343;
    EXPECT_EQ(distance_prime_upper({x}, {{mpq_class(0)}}, z0, p), PadicAbs::of_valuation(p, 3));
    EXPECT_EQ(distance({x}, z0, p), PadicAbs::of_valuation(p, 3));
    EXPECT_THROW(distance_prime_upper({x}, {}, p), domain_error);
}

TEST(DistancePrime, BoundsDistanceOnRandomHypersurfaces) {
    Rng rng(12);
    int checked = 0;
    for (int trial = 0; trial < 500; ++trial) {
        u64 const p = trial % 2 ? 3 : 5;
        int const n = static_cast<int>(rng.uniform(1, 3));
        // A hypersurface through two known integer points: one factor
        // X_i - y_i per sample.
        std::vector<std::vector<mpq_class>> samples;
        MPoly f = MPoly::constant(n, 1);
        for (int k = 0; k < 2; ++k) {
            auto const y = random_point(rng, n, p);
            samples.push_back(y);
        }
        for (auto const & y : samples) {
            int const i = static_cast<int>(rng.uniform(0, n - 1));
            f = f * (MPoly::variable(n, i) - MPoly::constant(n, y[i]));
        }
        IdealPresentation const ideal{n, {f}};
        auto const x = random_point(rng, n, p);
        PadicAbs const up = distance_prime_upper(x, samples, ideal, p);
        EXPECT_TRUE(distance(x, ideal, p) <= up);
        ++checked;
    }
    EXPECT_EQ(checked, 500);
}

TEST(GaussNorm, ExamplesAndGaussLemma) {
    u64 const p = 3;
    MPoly const x = MPoly::variable(1, 0);
    EXPECT_EQ(gauss_norm(MPoly::constant(1, 3) * x + MPoly::constant(1, 1), p), PadicAbs::of_valuation(p, 0));
    EXPECT_EQ(gauss_norm(MPoly::constant(1, 3) * x + MPoly::constant(1, 9), p), PadicAbs::of_valuation(p, 1));
    Rng rng(13);
    for (int trial = 0; trial < 500; ++trial) {
        u64 const q = trial % 3 == 0 ? 2 : trial % 3 == 1 ? 3 : 5;
        MPoly const f = random_poly(rng, 2, 4, q, 4), g = random_poly(rng, 2, 4, q, 4);
        if (f.is_zero() || g.is_zero()) continue;
        EXPECT_EQ(gauss_norm(f * g, q), gauss_norm(f, q) * gauss_norm(g, q));
    }
    PadicPolynomial const pf({PadicNumber::from_integer(9, p, 10), PadicNumber::from_integer(3, p, 10)});
    EXPECT_EQ(gauss_norm(pf), PadicAbs::of_valuation(p, 1));
}

TEST(IdealMembership, Examples) {
    u64 const p = 5;
    MPoly const x = MPoly::variable(2, 0), y = MPoly::variable(2, 1), one = MPoly::constant(2, 1);
    MPoly const f1 = x * x - y, f2 = x * y + one;
    auto const r = ideal_membership_bounded(f1, {f1, f2}, 2, p);
    EXPECT_EQ(r.a[0] * f1 + r.a[1] * f2, f1);
    EXPECT_TRUE(r.a_norm <= r.c * r.f_norm);
    EXPECT_TRUE(PadicAbs::of_valuation(p, 0) <= r.c);
    for (int cap = 1; cap <= 5; ++cap) {
        EXPECT_THROW(ideal_membership_bounded(one, {x, y}, cap, p), not_in_ideal_at_cap);
    }
}

TEST(IdealMembership, RoundTrips) {
    Rng rng(14);
    int done = 0;
    for (int trial = 0; trial < 200; ++trial) {
        u64 const p = trial % 2 ? 5 : 3;
        MPoly const f1 = random_poly(rng, 2, 2, p, 3), f2 = random_poly(rng, 2, 2, p, 3);
        if (f1.is_zero() || f2.is_zero()) continue;
        MPoly const x = MPoly::variable(2, 0);
        MPoly const f = x * f1 + MPoly::constant(2, static_cast<long>(p)) * f2;
        int const cap = std::max(f.total_degree(), std::max(f1.total_degree() + 1, f2.total_degree()));
        auto const r = ideal_membership_bounded(f, {f1, f2}, cap, p);
        EXPECT_EQ(r.a[0] * f1 + r.a[1] * f2, f);
        if (!f.is_zero()) {
            EXPECT_TRUE(r.a_norm <= r.c * r.f_norm);
        }
        ++done;
    }
    EXPECT_GT(done, 150);
}

TEST(UnionProduct, Examples) {
    u64 const p = 5;
    MPoly const x = MPoly::variable(1, 0), one = MPoly::constant(1, 1);
    IdealPresentation const z0{1, {x}}, z1{1, {x - one}};
    auto const same = check_union_product_distances({mpq_class(25)}, {}, z0, z0, DistanceMode::union_of_sets, p);
    EXPECT_TRUE(same.holds);
    auto const u = check_union_product_distances({mpq_class(25)}, {}, z0, z1, DistanceMode::union_of_sets, p);
    EXPECT_TRUE(u.holds);
    EXPECT_EQ(u.dist_combined, PadicAbs::of_valuation(p, 2));
    EXPECT_EQ(u.dist_z, PadicAbs::of_valuation(p, 2));
    EXPECT_EQ(u.dist_z2, PadicAbs::of_valuation(p, 0));
    auto const pr = check_union_product_distances({mpq_class(25)}, {mpq_class(6)}, z0, z1, DistanceMode::product_of_sets, p);
    EXPECT_TRUE(pr.holds);
    EXPECT_EQ(pr.dist_combined, PadicAbs::of_valuation(p, 1));
}

TEST(UnionProduct, RandomChains) {
    Rng rng(15);
    for (int trial = 0; trial < 500; ++trial) {
        u64 const p = trial % 2 ? 3 : 7;
        int const n = static_cast<int>(rng.uniform(1, 2));
        IdealPresentation z{n, {random_poly(rng, n, 2, p, 2), random_poly(rng, n, 2, p, 2)}};
        IdealPresentation z2{n, {random_poly(rng, n, 2, p, 2)}};
        auto const x = random_point(rng, n, p), y = random_point(rng, n, p);
        EXPECT_TRUE(check_union_product_distances(x, {}, z, z2, DistanceMode::union_of_sets, p).holds);
        EXPECT_TRUE(check_union_product_distances(x, y, z, z2, DistanceMode::product_of_sets, p).holds);
    }
}

TEST(Hecke, Examples) {
    u64 const p = 13;
    auto const same = hecke_image_point({mpz_class(0), mpz_class(1728)}, {1, 1}, p, 10, 2);
    ASSERT_EQ(same.size(), 1u);
    EXPECT_TRUE(same[0][1].agrees_with(PadicNumber::from_integer(1728, p, 10)));
    auto const img = hecke_image_point({mpz_class(0)}, {2}, p, 10, 2);
    EXPECT_LE(img.size(), 3u);
    ASSERT_FALSE(img.empty());
    IntegerPolynomial const h12 = hilbert_class_poly(-12), h3 = hilbert_class_poly(-3);
    for (auto const & pt : img) {
        ASSERT_EQ(pt.size(), 1u);
        PadicPolynomial const a = PadicPolynomial::from_integer_polynomial(h12, pt[0].ring(), 20);
        PadicPolynomial const b = PadicPolynomial::from_integer_polynomial(h3, pt[0].ring(), 20);
        EXPECT_TRUE(a.eval(pt[0]).ord_lower_bound() >= 10 || b.eval(pt[0]).ord_lower_bound() >= 10);
    }
}

TEST(Hecke, CountsAtMostPsi) {
    Rng rng(16);
    for (int trial = 0; trial < 30; ++trial) {
        u64 const p = trial % 2 ? 5 : 7;
        int const level = supported_levels()[rng.uniform(1, 4)];
        mpz_class const x = static_cast<long>(rng.uniform(-1000, 1000));
        auto const img = hecke_image_point({x}, {level}, p, 8, 2);
        EXPECT_LE(img.size(), psi(level));
        for (auto const & pt : img) {
            PadicPolynomial const f = PadicPolynomial::from_integer_polynomial(modular_poly(level).in_y(x), pt[0].ring(), 30);
            EXPECT_GE(f.eval(pt[0]).ord_lower_bound(), 8);
        }
    }
    // p-adic coordinates: the image of a root of H_{-23} at p = 3 under T_2.
    auto const roots = roots_in_unramified(hilbert_class_poly(-23), 3, 3, 12);
    ASSERT_FALSE(roots.empty());
    auto const img = hecke_image_point(std::vector<PadicNumber>{roots[0]}, HeckeLevel{2}, 10, 6);
    EXPECT_LE(img.size(), 3u);
    for (auto const & pt : img) {
        EXPECT_TRUE(modular_poly(2).eval(roots[0], pt[0]).ord_lower_bound() >= 9);
    }
}

TEST(Resultant, AgreesWithDirectEvaluation) {
    // For degree-one class polynomials R = Phi_N(a, b) exactly.
    std::vector<long long> ds = {-3, -4, -7, -8, -11, -12, -16, -19, -27, -28};
    for (long long d1 : ds) {
        for (long long d2 : ds) {
            IntegerPolynomial const h1 = hilbert_class_poly(d1), h2 = hilbert_class_poly(d2);
            ASSERT_EQ(h1.degree(), 1);
            for (int level : {1, 2, 3}) {
                bool const zero = modular_poly(level).eval(-h1.coeff(0), -h2.coeff(0)) == 0;
                EXPECT_EQ(phi_resultant_certificate(h1, h2, modular_poly(level)).zero, zero) << d1 << " " << d2 << " " << level;
            }
        }
    }
    // Higher class numbers: H_d shares a root with itself under Phi_1.
    EXPECT_TRUE(phi_resultant_certificate(hilbert_class_poly(-23), hilbert_class_poly(-23), modular_poly(1)).zero);
    EXPECT_FALSE(phi_resultant_certificate(hilbert_class_poly(-23), hilbert_class_poly(-31), modular_poly(1)).zero);
    // -23 = 1 mod 8: 2 splits, so Phi_2 links classes of the same discriminant.
    EXPECT_TRUE(phi_resultant_certificate(hilbert_class_poly(-23), hilbert_class_poly(-23), modular_poly(2)).zero);
}

TEST(Rigidity, Examples) {
    u64 const p = 5;
    ResultantCertifier certifier;
    IntegerPolynomial const h = hilbert_class_poly(-11);
    auto const roots = roots_in_unramified(h, p, 2, 20);
    ASSERT_EQ(roots.size(), 1u);
    CmPoint const x{-11, h, roots[0]};
    auto const same = rigidity_threshold_check(x, x, 1, p, certifier);
    EXPECT_TRUE(same.pass);
    EXPECT_TRUE(same.certified_zero);
    EXPECT_EQ(same.threshold, mpq_class(3, 2));

    // Distinct ordinary roots: H_{-19} and H_{-11} at p = 5, both split.
    IntegerPolynomial const h19 = hilbert_class_poly(-19);
    auto const r19 = roots_in_unramified(h19, p, 2, 20);
    ASSERT_EQ(r19.size(), 1u);
    auto const rep = rigidity_threshold_check(x, CmPoint{-19, h19, r19[0]}, 1, p, certifier);
    EXPECT_TRUE(rep.pass);
    ASSERT_TRUE(rep.ord.has_value());
    EXPECT_LE(*rep.ord, 1);

    IntegerPolynomial const h3 = hilbert_class_poly(-3);
    CmPoint const ss{-3, h3, PadicNumber::zero(unramified_ring(p, 1))};
    EXPECT_THROW(rigidity_threshold_check(ss, x, 1, p, certifier), domain_error);
}

TEST(Rigidity, SameDiscriminantLevelTwo) {
    // -23 at p = 3 (split): Phi_2 vanishes at pairs of distinct roots.
    u64 const p = 3;
    ResultantCertifier certifier;
    IntegerPolynomial const h = hilbert_class_poly(-23);
    auto const roots = roots_in_unramified(h, p, 3, 30);
    int certified = 0;
    for (auto const & a : roots) {
        for (auto const & b : roots) {
            auto const r = rigidity_threshold_check({-23, h, a}, {-23, h, b}, 2, p, certifier);
            EXPECT_TRUE(r.pass);
            certified += r.certified_zero;
        }
    }
    EXPECT_GT(certified, 0);
}
