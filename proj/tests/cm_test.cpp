#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "singmod/cm/class_group.hpp"
#include "singmod/cm/hilbert.hpp"
#include "singmod/cm/singular_moduli.hpp"
#include "singmod/core/rng.hpp"

using namespace singmod;

namespace {

// Dirichlet's class number formula for fundamental d < -4:
// h = -(1/|d|) sum_{a=1}^{|d|} (d|a) a.
long class_number_formula(long long d) {
    long long const n = -d;
    long long s = 0;
    for (long long a = 1; a <= n; ++a) s += kronecker(d, static_cast<u64>(a)) * a;
    return static_cast<long>(-s / n);
}

// Integral ideals of norm m by class: an ideal g * [n, (-b + sqrt d)/2]
// with m = g^2 n and b mod 2n, b^2 = d mod 4n, has the class of the form
// (n, b, (b^2 - d)/(4n)).
std::vector<long long> ideal_counts(ClassGroup const & g, long long m) {
    std::vector<long long> out(g.class_number(), 0);
    long long const d = g.d();
    for (long long k = 1; k * k <= m; ++k) {
        if (m % (k * k) != 0) continue;
        long long const n = m / (k * k);
        for (long long b = 0; b < 2 * n; ++b) {
            if (((b * b - d) % (4 * n)) != 0) continue;
            QuadraticForm const f{n, b, (b * b - d) / (4 * n)};
            ++out[g.index_of(f)];
        }
    }
    return out;
}

// H_d from E4^3 / Delta alone, at a generous fixed precision.
IntegerPolynomial hcp_by_eisenstein(long long d, long bits) {
    ClassGroup const g(d);
    std::vector<mp::Complex> poly;
    poly.emplace_back(mp::Real(bits, 1L), mp::Real(bits));
    for (auto const & f : g.forms()) {
        mp::Complex const j = j_eisenstein(cm_point(f, bits));
        std::vector<mp::Complex> next(poly.size() + 1, mp::Complex(bits));
        for (std::size_t k = 0; k < poly.size(); ++k) {
            next[k + 1] = next[k + 1] + poly[k];
            next[k] = next[k] - poly[k] * j;
        }
        poly = std::move(next);
    }
    std::vector<mpz_class> c;
    for (auto const & x : poly) c.push_back(x.re.round().first);
    return IntegerPolynomial(c);
}

}  // namespace

TEST(Discriminant, FundamentalAndConductor) {
    EXPECT_TRUE(make_discriminant(-3).is_fundamental());
    EXPECT_TRUE(make_discriminant(-4).is_fundamental());
    EXPECT_TRUE(make_discriminant(-8).is_fundamental());
    auto const d12 = make_discriminant(-12);
    EXPECT_EQ(d12.fundamental, -3);
    EXPECT_EQ(d12.conductor, 2);
    auto const d16 = make_discriminant(-16);
    EXPECT_EQ(d16.fundamental, -4);
    EXPECT_EQ(d16.conductor, 2);
    auto const d63 = make_discriminant(-63);
    EXPECT_EQ(d63.fundamental, -7);
    EXPECT_EQ(d63.conductor, 3);
    EXPECT_THROW(make_discriminant(-5), domain_error);
    EXPECT_THROW(make_discriminant(4), domain_error);
    // Square-free criterion checked directly.
    for (long long d = -3; d >= -400; --d) {
        long long const r = ((d % 4) + 4) % 4;
        if (r != 0 && r != 1) continue;
        bool expect;
        if (r == 1) {
            expect = is_squarefree(static_cast<u64>(-d));
        } else {
            long long const m = -d / 4;
            expect = is_squarefree(static_cast<u64>(m)) && (((-m) % 4 + 4) % 4 == 2 || ((-m) % 4 + 4) % 4 == 3);
        }
        EXPECT_EQ(is_fundamental_discriminant(d), expect) << d;
    }
}

TEST(ClassGroup, SmallExamples) {
    ClassGroup const g3(-3);
    ASSERT_EQ(g3.class_number(), 1);
    EXPECT_EQ(g3.form(0), (QuadraticForm{1, 1, 1}));
    EXPECT_EQ(ClassGroup(-11).class_number(), 1);
    EXPECT_EQ(ClassGroup(-4).class_number(), 1);
    EXPECT_EQ(ClassGroup(-12).class_number(), 1);
}

TEST(ClassGroup, ReducedFormsMatchBruteForce) {
    for (long long d = -3; d >= -600; --d) {
        long long const r = ((d % 4) + 4) % 4;
        if (r != 0 && r != 1) continue;
        std::set<QuadraticForm> brute;
        for (long long a = 1; a <= -d; ++a) {
            for (long long b = -a; b <= a; ++b) {
                if ((b * b - d) % (4 * a) != 0) continue;
                QuadraticForm const f{a, b, (b * b - d) / (4 * a)};
                if (std::gcd(std::gcd(f.a, std::llabs(f.b)), f.c) == 1 && f.is_reduced()) brute.insert(f);
            }
        }
        ClassGroup const g(d);
        std::set<QuadraticForm> const got(g.forms().begin(), g.forms().end());
        EXPECT_EQ(got, brute) << d;
    }
}

TEST(ClassGroup, ClassNumberFormula) {
    for (long long d : fundamental_discriminants(1200)) {
        if (d >= -4) continue;
        EXPECT_EQ(ClassGroup(d).class_number(), class_number_formula(d)) << d;
    }
    EXPECT_EQ(ClassGroup(-503).class_number(), class_number_formula(-503));
}

TEST(ClassGroup, GroupLaws) {
    Rng rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        long long d;
        do {
            d = -rng.uniform(3, 4000);
        } while (((d % 4) + 4) % 4 > 1);
        ClassGroup const g(d);
        int const h = g.class_number();
        for (int k = 0; k < 20; ++k) {
            int const a = static_cast<int>(rng.uniform(0, h - 1));
            int const b = static_cast<int>(rng.uniform(0, h - 1));
            int const c = static_cast<int>(rng.uniform(0, h - 1));
            EXPECT_EQ(g.compose(g.compose(a, b), c), g.compose(a, g.compose(b, c))) << d;
            EXPECT_EQ(g.compose(a, b), g.compose(b, a));
            EXPECT_EQ(g.compose(a, g.inverse(a)), g.identity());
            EXPECT_EQ(g.compose(a, g.identity()), a);
        }
    }
}

TEST(ClassGroup, NoOrderTwoForPrimeDiscriminant) {
    for (u64 ell : primes_up_to(3000)) {
        if (ell % 4 != 3) continue;
        ClassGroup const g(-static_cast<long long>(ell));
        std::set<int> squares;
        for (int i = 0; i < g.class_number(); ++i) {
            squares.insert(g.compose(i, i));
            if (i != g.identity()) {
                EXPECT_NE(g.order(i), 2) << ell;
            }
        }
        EXPECT_EQ(static_cast<int>(squares.size()), g.class_number()) << ell;
    }
}

TEST(RepresentationCount, Examples) {
    ClassGroup const g(-11);
    EXPECT_EQ(representation_count(g, g.identity(), 1), 1);
    EXPECT_EQ(representation_count(g, g.identity(), 2), 0);
    EXPECT_EQ(representation_count(g, g.identity(), 3), 2);
    ClassGroup const g4(-4);
    EXPECT_EQ(representation_count(g4, g4.identity(), 1), 1);
    EXPECT_EQ(representation_count(g4, g4.identity(), 5), 2);
    EXPECT_THROW(representation_count(ClassGroup(-12), 0, 3), domain_error);
}

TEST(RepresentationCount, MatchesIdealEnumeration) {
    for (long long d : {-3LL, -4LL, -7LL, -8LL, -11LL, -15LL, -20LL, -23LL, -47LL, -56LL, -71LL, -84LL, -131LL, -159LL}) {
        ClassGroup const g(d);
        for (long long m = 1; m <= 50; ++m) {
            auto const oracle = ideal_counts(g, m);
            long long total = 0, via_chi = 0;
            for (int i = 0; i < g.class_number(); ++i) {
                EXPECT_EQ(representation_count(g, i, m), oracle[i]) << d << " " << m << " " << g.form(i).to_string();
                total += representation_count(g, i, m);
            }
            for (long long k = 1; k <= m; ++k) {
                if (m % k == 0) via_chi += kronecker(d, static_cast<u64>(k));
            }
            EXPECT_EQ(total, via_chi) << d << " " << m;
        }
    }
}

TEST(JInvariant, EtaAgreesWithEisenstein) {
    for (auto const & [re, im] : std::vector<std::pair<char const *, char const *>>{
             {"0", "1.1"}, {"0.3", "0.9"}, {"-0.5", "0.8660254037844386"}, {"0.125", "2.5"}}) {
        mp::Complex const tau(mp::Real(300, re), mp::Real(300, im));
        mp::Complex const a = j_invariant(tau);
        mp::Complex const b = j_eisenstein(tau);
        mp::Real const rel = (a - b).norm() / (mp::Real(300, 1L) + a.norm());
        EXPECT_LT(rel.to_double(), 1e-80) << re << " " << im;
    }
}

TEST(HilbertClassPoly, SmallDiscriminants) {
    EXPECT_EQ(hilbert_class_poly(-3), IntegerPolynomial({0, 1}));
    EXPECT_EQ(hilbert_class_poly(-4), IntegerPolynomial({-1728, 1}));
    EXPECT_EQ(hilbert_class_poly(-11), IntegerPolynomial({32768, 1}));
    // Frozen from hcp_by_eisenstein at 512 bits.
    mpz_class const c163 = mpz_class(640320) * 640320 * 640320;
    EXPECT_EQ(hilbert_class_poly(-163), IntegerPolynomial({c163, 1}));
    EXPECT_EQ(hcp_by_eisenstein(-163, 512), IntegerPolynomial({c163, 1}));
    EXPECT_EQ(hilbert_class_poly(-8), IntegerPolynomial({-8000, 1}));
    EXPECT_EQ(hilbert_class_poly(-12), IntegerPolynomial({-54000, 1}));
}

TEST(HilbertClassPoly, AgreesWithIndependentEvaluation) {
    for (long long d : {-15LL, -23LL, -31LL, -39LL, -47LL, -56LL, -71LL, -84LL, -104LL, -503LL}) {
        IntegerPolynomial const h = hilbert_class_poly(d);
        EXPECT_EQ(h.degree(), ClassGroup(d).class_number()) << d;
        EXPECT_TRUE(h.is_monic());
        long const bits = 2 * hcp_precision_bits(ClassGroup(d));
        EXPECT_EQ(h, hcp_by_eisenstein(d, bits)) << d;
    }
}

TEST(HilbertClassPoly, DegreeIsClassNumber) {
    for (long long d = -3; d >= -300; --d) {
        long long const r = ((d % 4) + 4) % 4;
        if (r != 0 && r != 1) continue;
        EXPECT_EQ(hilbert_class_poly(d).degree(), ClassGroup(d).class_number()) << d;
    }
}

TEST(HilbertClassPoly, Errors) {
    HcpOptions opt;
    opt.max_abs_d = 1000;
    EXPECT_THROW(hilbert_class_poly(-1003, opt), resource_error);
    HcpOptions low;
    low.precision_bits = 24;
    low.attempts = 1;
    EXPECT_THROW(hilbert_class_poly(-71, low), precision_failure);
    // Doubling recovers from a low starting precision.
    low.precision_bits = 200;
    low.attempts = 3;
    EXPECT_EQ(hilbert_class_poly(-71, low), hilbert_class_poly(-71));
}

TEST(HilbertClassPoly, Cache) {
    auto const dir = std::filesystem::temp_directory_path() / "singmod_cm_test_cache";
    std::filesystem::remove_all(dir);
    HcpOptions opt;
    opt.cache_dir = dir.string();
    IntegerPolynomial const h = hilbert_class_poly(-47, opt);
    auto const file = dir / "hcp_47.txt";
    ASSERT_TRUE(std::filesystem::exists(file));
    {
        std::ifstream in(file);
        long long d;
        int deg;
        in >> d >> deg;
        EXPECT_EQ(d, -47);
        EXPECT_EQ(deg, 5);
    }
    IntegerPolynomial loaded;
    ASSERT_TRUE(hcp_cache_load(dir.string(), -47, loaded));
    EXPECT_EQ(loaded, h);
    EXPECT_EQ(hilbert_class_poly(-47, opt), h);
    // Corrupt one coefficient: the checksum no longer matches.
    std::vector<std::string> lines;
    {
        std::ifstream in(file);
        for (std::string s; std::getline(in, s);) lines.push_back(s);
    }
    lines[1] = "1" + lines[1];
    {
        std::ofstream out(file, std::ios::trunc);
        for (auto const & s : lines) out << s << '\n';
    }
    try {
        hilbert_class_poly(-47, opt);
        FAIL() << "corrupt cache accepted";
    } catch (validation_error const & e) {
        EXPECT_EQ(e.invariant(), "cache-checksum");
    }
    std::filesystem::remove_all(dir);
}

TEST(ReductionType, Examples) {
    for (u64 p : {2, 5, 11, 17, 23}) EXPECT_EQ(reduction_type(-3, p), ReductionType::supersingular);
    EXPECT_EQ(reduction_type(-11, 3), ReductionType::ordinary);
    EXPECT_EQ(reduction_type(-4, 2), ReductionType::supersingular);
    EXPECT_EQ(reduction_type(-503, 5), ReductionType::supersingular);  // -503 = 2 mod 5
    EXPECT_THROW(reduction_type(-12, 2), domain_error);
    // Splitting by brute force: x^2 = d mod p solvable with p odd, p not dividing d.
    for (long long d : fundamental_discriminants(200)) {
        for (u64 p : primes_up_to(60)) {
            if (p == 2 || d % static_cast<long long>(p) == 0) continue;
            bool square = false;
            for (u64 x = 0; x < p; ++x) {
                if ((x * x) % p == static_cast<u64>(((d % static_cast<long long>(p)) + p) % p)) square = true;
            }
            EXPECT_EQ(reduction_type(d, p) == ReductionType::ordinary, square) << d << " " << p;
        }
    }
}

TEST(SingularModuli, Examples) {
    auto const r11 = singular_moduli_at(-11, 2, 10, 2);
    ASSERT_EQ(r11.valuations.size(), 1u);
    EXPECT_EQ(r11.valuations[0], (ExtValuation{false, 15}));
    EXPECT_FALSE(r11.roots_filled);

    auto const r3 = singular_moduli_at(-3, 5, 10, 2);
    ASSERT_EQ(r3.valuations.size(), 1u);
    EXPECT_TRUE(r3.valuations[0].infinite);

    auto const r23 = singular_moduli_at(-23, 2, 10, 3);
    EXPECT_EQ(r23.valuations.size(), 3u);
    EXPECT_EQ(r23.finite_valuation_sum(), mpq_class(valuation(r23.hcp.coeff(0), 2)));
    EXPECT_EQ(r23.type, ReductionType::ordinary);
    ASSERT_TRUE(r23.roots_filled);
    // Every root found satisfies H to the requested precision; there are at
    // most deg H of them.
    int total = 0;
    for (auto const & x : r23.roots) {
        PadicPolynomial const hp = PadicPolynomial::from_integer_polynomial(r23.hcp, x.ring(), 40);
        EXPECT_GE(hp.eval(x).ord_lower_bound(), 10);
        ++total;
    }
    EXPECT_LE(total, 3);
}

TEST(SingularModuli, ValuationSumIdentity) {
    for (long long d : fundamental_discriminants(400)) {
        IntegerPolynomial const h = hilbert_class_poly(d);
        for (u64 p : {2, 3, 5, 7}) {
            if (h.coeff(0) == 0) continue;
            NewtonPolygon const np = newton_polygon(h, p);
            bool negative = true;
            for (auto const & s : np.segments()) negative = negative && s.slope < 0;
            if (!negative) continue;
            EXPECT_EQ(np.valuation_sum(), mpq_class(valuation(h.coeff(0), p))) << d << " " << p;
        }
    }
}
