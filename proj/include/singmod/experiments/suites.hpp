#pragma once

// Randomised property suites with their oracles. Each suite yields one
// report case per parameter set; the first few failing instances are
// kept in the values so a FAIL can be reproduced from the report.

#include <array>
#include <functional>

#include "singmod/core/rng.hpp"
#include "singmod/experiments/options.hpp"
#include "singmod/experiments/prop12.hpp"
#include "singmod/experiments/report.hpp"
#include "singmod/galois/conjugator.hpp"
#include "singmod/modular/distance.hpp"
#include "singmod/quaternion/order.hpp"
#include "singmod/sieve/squarefree.hpp"

namespace singmod {

struct SuiteCounts {
    int lemma21 = 1000;
    int lemma22 = 1000;
    std::vector<u64> gram_primes{5, 11, 17, 23};
    int phi = 100;
    int norm_pairs = 500;
    u64 sieve_y = 1'000'000;
    u64 density_L = 100'000;
    std::vector<u64> density_primes{5, 7, 11, 13};
    std::vector<long> density_levels{1, 2, 3};
    int chains = 500;
    int round_trips = 200;
    int dist_prime = 500;

    static SuiteCounts reduced() {
        SuiteCounts c;
        c.lemma21 = 100;
        c.lemma22 = 60;
        c.phi = 20;
        c.norm_pairs = 50;
        c.sieve_y = 100'000;
        c.density_L = 1000;
        c.density_primes = {5, 11};
        c.density_levels = {1, 2};
        c.chains = 50;
        c.round_trips = 20;
        c.dist_prime = 50;
        return c;
    }
};

namespace detail {

/// Collects instance failures; keeps the first few in full.
struct FailureLog {
    int count = 0;
    Json examples = Json::array();

    void add(Json what) {
        if (++count <= 5) examples.push_back(std::move(what));
    }
    void finish(ReportCase & c, int instances) const {
        c.values["instances"] = instances;
        c.values["failures"] = count;
        c.values["failure_examples"] = examples;
        c.verdict = count == 0 ? Verdict::pass : Verdict::fail;
    }
};

/// Seeds differ per case so that suites can be run in any subset.
inline Rng case_rng(std::uint64_t seed, std::string const & id) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char ch : id) h = (h ^ static_cast<unsigned char>(ch)) * 1099511628211ULL;
    return Rng(seed ^ h);
}

inline mpz_class integer_entry(PadicNumber const & x) {
    if (x.is_zero()) return 0;
    mpz_class const pn = power(static_cast<long>(x.prime()), static_cast<unsigned long>(x.absolute_precision()));
    mpz_class v = x.coordinates(x.absolute_precision())[0];
    if (v > pn / 2) v -= pn;
    return v;
}

inline long rational_ord(mpq_class const & q, u64 p) {
    return valuation(mpz_class(q.get_num()), p) - valuation(mpz_class(q.get_den()), p);
}

}  // namespace detail

/// ord(gamma^D - 1) = ord(D) + ord(gamma - 1) for p odd, and
/// ord(gamma^D - 1) <= ord(D) + ord(gamma^2 - 1) - 1 for p = 2; the p-adic
/// left side is compared with ord of the integer gamma^D - 1.
inline ReportCase lemma21_case(u64 p, int count, std::uint64_t seed) {
    std::string const id = "lemma21/p=" + std::to_string(p);
    return guarded_case(id, Json{{"p", p}, {"count", count}}, [&](ReportCase & c) {
        Rng rng = detail::case_rng(seed, id);
        detail::FailureLog log;
        int equalities = 0;
        for (int i = 0; i < count; ++i) {
            long const m = rng.uniform(1, 6);
            mpz_class const gamma = 1 + mpz_class(static_cast<long>(rng.uniform(1, 1000))) * power(static_cast<long>(p), static_cast<unsigned long>(m));
            long const D = rng.uniform(1, 200);
            LogOrderRecord const r = log_order_predicate(PadicNumber::from_integer(gamma, p, 80), D);
            mpz_class g;
            mpz_pow_ui(g.get_mpz_t(), gamma.get_mpz_t(), static_cast<unsigned long>(D));
            long const oracle = valuation(mpz_class(g - 1), p);
            bool const form_ok = p == 2 ? r.lhs <= r.rhs : r.lhs == r.rhs;
            equalities += r.lhs == r.rhs;
            if (!r.holds || !form_ok || r.lhs != oracle) {
                log.add({{"gamma", exact(gamma)}, {"D", D}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"oracle_lhs", oracle}});
            }
        }
        c.values["equalities"] = equalities;
        c.values["relation"] = p == 2 ? "inequality" : "equality";
        log.finish(c, count);
    });
}

/// Conjugator properties, with every entry of every B_i compared against
/// A_i^{-1} diag(alpha^D, beta^D) A_i / p^e computed over Q.
inline ReportCase lemma22_case(u64 p, int count, std::uint64_t seed) {
    std::string const id = "lemma22/p=" + std::to_string(p);
    return guarded_case(id, Json{{"p", p}, {"count", count}}, [&](ReportCase & c) {
        Rng rng = detail::case_rng(seed, id);
        detail::FailureLog log;
        int case2 = 0;
        for (int i = 0; i < count; ++i) {
            long const D = rng.uniform(1, 24);
            long const k0 = std::max(1L, 2 * valuation(static_cast<u64>(2 * D), p)) + rng.uniform(0, 3);
            int const n = static_cast<int>(rng.uniform(1, 3));
            std::vector<MatrixGL2> As;
            for (int j = 0; j < n; ++j) As.push_back(random_gl2_matrix(rng, p, 80));
            ConjugatorResult const r = construct_conjugator(As, k0, D);
            case2 += r.case_tag == 2;
            std::vector<std::string> bad;
            if (!r.all_integral()) bad.push_back("B integral");
            if (!r.some_not_in_p_m2()) bad.push_back("some B_i not in pM2");
            if (!r.bounds_hold()) bad.push_back("k0 <= ord <= 3 D k0");
            if (!r.e_bound_holds()) bad.push_back("0 <= e <= D k0 - k0/2");
            mpz_class aD, bD;
            mpz_pow_ui(aD.get_mpz_t(), r.alpha.get_mpz_t(), static_cast<unsigned long>(D));
            mpz_pow_ui(bD.get_mpz_t(), r.beta.get_mpz_t(), static_cast<unsigned long>(D));
            mpq_class pe(power(static_cast<long>(p), mpz_class(abs(r.e)).get_ui()));
            if (r.e < 0) pe = 1 / pe;
            if (r.ord_alpha_beta != valuation(mpz_class(aD * bD), p) - 2 * r.e) bad.push_back("ord(alpha^D beta^D / p^2e) oracle");
            mpq_class const s = mpq_class(aD) / pe, t = mpq_class(bD) / pe;
            for (int j = 0; j < n; ++j) {
                std::array<mpz_class, 4> A;
                for (int k = 0; k < 4; ++k) A[k] = detail::integer_entry(As[j].e[k]);
                mpq_class const det = A[0] * A[3] - A[1] * A[2];
                std::array<mpq_class, 4> const inv{A[3] / det, -A[1] / det, -A[2] / det, A[0] / det};
                std::array<mpq_class, 4> const B{inv[0] * s * A[0] + inv[1] * t * A[2], inv[0] * s * A[1] + inv[1] * t * A[3],
                                                 inv[2] * s * A[0] + inv[3] * t * A[2], inv[2] * s * A[1] + inv[3] * t * A[3]};
                for (int k = 0; k < 4; ++k) {
                    PadicNumber const & b = r.B[j].e[k];
                    if (B[k] == 0) {
                        if (!b.is_zero()) bad.push_back("B entry should vanish");
                        continue;
                    }
                    long const v = detail::rational_ord(B[k], p);
                    if (b.is_zero() ? v < b.absolute_precision() : b.valuation() != v) bad.push_back("B entry valuation oracle");
                }
            }
            if (!bad.empty()) log.add({{"D", D}, {"k0", k0}, {"matrices", n}, {"failed", bad}});
        }
        c.values["case2_instances"] = case2;
        log.finish(c, count);
    });
}

inline std::vector<ReportCase> quaternion_cases(SuiteCounts const & counts, std::uint64_t seed) {
    std::vector<ReportCase> out;
    out.push_back(guarded_case("quaternion/gram", Json{{"primes", counts.gram_primes}}, [&](ReportCase & c) {
        detail::FailureLog log;
        Json dets = Json::object();
        for (u64 p : counts.gram_primes) {
            mpq_class const det = gram_matrix(p).det;
            dets[std::to_string(p)] = exact(det);
            if (det != -mpq_class(static_cast<long>(p * p))) log.add({{"p", p}, {"det", exact(det)}});
        }
        c.values["determinants"] = dets;
        log.finish(c, static_cast<int>(counts.gram_primes.size()));
    }));
    out.push_back(guarded_case("quaternion/basis_products", Json{{"primes", counts.gram_primes}}, [&](ReportCase & c) {
        detail::FailureLog log;
        int n = 0;
        for (u64 p : counts.gram_primes) {
            auto const b = order_basis(p);
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) {
                    ++n;
                    QuaternionElement const x = b[i] * b[j];
                    // Membership by the congruence conditions and by
                    // integrality of basis coordinates.
                    auto const co = basis_coordinates(x);
                    bool const coords_ok = std::all_of(co.begin(), co.end(), is_integer);
                    if (!order_contains(x) || !coords_ok) log.add({{"p", p}, {"i", i + 1}, {"j", j + 1}, {"product", x.to_string()}});
                }
            }
        }
        log.finish(c, n);
    }));
    out.push_back(guarded_case("quaternion/phi", Json{{"count", counts.phi}}, [&](ReportCase & c) {
        Rng rng = detail::case_rng(seed, "quaternion/phi");
        detail::FailureLog log;
        for (int i = 0; i < counts.phi; ++i) {
            u64 const p = i % 2 ? 5 : 11;
            long const n = rng.uniform(0, 5);
            long x = 2 * rng.uniform(0, 49) + 1;
            if (rng.coin()) x = -x;
            PhiCertificate const cert = construct_phi(n, x, p);
            // Second route: trace 1 and norm (1 + d)/4 give the same
            // quadratic through the characteristic polynomial.
            bool const char_ok = cert.phi.reduced_trace() == 1 && 4 * cert.phi.reduced_norm() == mpq_class(1 + cert.d);
            if (!cert.quadratic_ok || !cert.decomposition_ok || !char_ok) {
                log.add({{"p", p}, {"n", n}, {"x", x}, {"quadratic", cert.quadratic_ok}, {"decomposition", cert.decomposition_ok}});
            }
        }
        log.finish(c, counts.phi);
    }));
    out.push_back(guarded_case("quaternion/norm", Json{{"count", counts.norm_pairs}}, [&](ReportCase & c) {
        Rng rng = detail::case_rng(seed, "quaternion/norm");
        detail::FailureLog log;
        auto matmul = [](std::array<EisensteinNumber, 4> const & a, std::array<EisensteinNumber, 4> const & b) {
            return std::array<EisensteinNumber, 4>{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
                                                   a[2] * b[1] + a[3] * b[3]};
        };
        for (int i = 0; i < counts.norm_pairs; ++i) {
            u64 const p = counts.gram_primes[static_cast<std::size_t>(i) % counts.gram_primes.size()];
            QuaternionElement const x = random_quaternion(rng, p, 21, 60), y = random_quaternion(rng, p, 21, 60);
            mpq_class const lhs = (x * y).reduced_norm();
            mpq_class const rhs = x.reduced_norm() * y.reduced_norm();
            // Matrix route: the product of the 2x2 matrices over K.
            auto const m = matmul(x.to_matrix(), y.to_matrix());
            EisensteinNumber const det = m[0] * m[3] - m[1] * m[2];
            bool const matrix_ok = m == (x * y).to_matrix() && det == EisensteinNumber(rhs, 0);
            if (lhs != rhs || !matrix_ok) log.add({{"p", p}, {"x", x.to_string()}, {"y", y.to_string()}});
        }
        log.finish(c, counts.norm_pairs);
    }));
    return out;
}

inline std::vector<ReportCase> sieve_cases(SuiteCounts const & counts, ExperimentOptions const & opt) {
    std::vector<ReportCase> out;
    auto cfg = [&](u64 p, long n) {
        SieveConfig c;
        c.p = p;
        c.n = n;
        c.y_cap = opt.max_y;
        c.threads = opt.thread_count();
        return c;
    };
    std::vector<std::pair<u64, long>> const configs{{5, 1}, {5, 2}, {11, 1}};
    for (auto const & [p, n] : configs) {
        std::string const id = "sieve/count/p=" + std::to_string(p) + ",n=" + std::to_string(n);
        out.push_back(guarded_case(id, Json{{"p", p}, {"n", n}, {"y", counts.sieve_y}}, [&](ReportCase & c) {
            u64 const brute = count_N(counts.sieve_y, cfg(p, n), CountMethod::brute);
            u64 const mob = count_N(counts.sieve_y, cfg(p, n), CountMethod::mobius);
            c.values["brute"] = brute;
            c.values["mobius"] = mob;
            c.verdict = brute == mob ? Verdict::pass : Verdict::fail;
        }));
    }
    for (auto const & [p, n] : configs) {
        std::string const id = "sieve/rho/p=" + std::to_string(p) + ",n=" + std::to_string(n);
        out.push_back(guarded_case(id, Json{{"p", p}, {"n", n}}, [&](ReportCase & c) {
            auto const k = cfg(p, n);
            detail::FailureLog log;
            int checks = 0;
            ++checks;
            if (rho(4, k) != 2 || rho_brute(4, k) != 2) log.add("rho(4) = 2");
            u64 pe = 1;
            for (int e = 1; e <= 6; ++e) {
                pe *= 3;
                ++checks;
                if (rho(pe, k) != 0 || rho_brute(pe, k) != 0) log.add("rho(3^" + std::to_string(e) + ") = 0");
            }
            for (u64 l : primes_up_to(97)) {
                if (l == 2 || l == 3 || l == p) continue;
                ++checks;
                u64 const r1 = rho(l, k), r2 = rho(l * l, k);
                if (r1 != r2 || r1 != rho_brute(l, k) || r2 != rho_brute(l * l, k)) {
                    log.add({{"l", l}, {"rho_l", r1}, {"rho_l2", r2}});
                }
            }
            log.finish(c, checks);
        }));
    }
    for (u64 p : counts.density_primes) {
        for (long n : counts.density_levels) {
            std::string const id = "sieve/density/p=" + std::to_string(p) + ",n=" + std::to_string(n);
            out.push_back(guarded_case(id, Json{{"p", p}, {"n", n}, {"L", counts.density_L}}, [&](ReportCase & c) {
                DensityInterval const I = euler_product_c(cfg(p, n), counts.density_L);
                c.values["interval"] = density_json(I);
                c.verdict = density_exceeds_one_seventh(I) ? Verdict::pass : Verdict::fail;
            }));
        }
    }
    return out;
}

namespace detail {

inline MPoly random_mpoly(Rng & rng, int nvars, int degree, u64 p, int terms) {
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

inline std::vector<mpq_class> random_rational_point(Rng & rng, int nvars, u64 p) {
    std::vector<mpq_class> x;
    for (int i = 0; i < nvars; ++i) {
        mpz_class v = static_cast<long>(rng.uniform(-50, 50));
        v *= power(static_cast<long>(p), static_cast<unsigned long>(rng.uniform(0, 4)));
        x.emplace_back(v);
    }
    return x;
}

}  // namespace detail

inline std::vector<ReportCase> distance_cases(SuiteCounts const & counts, std::uint64_t seed) {
    std::vector<ReportCase> out;
    out.push_back(guarded_case("distance/union_product", Json{{"count", counts.chains}}, [&](ReportCase & c) {
        Rng rng = detail::case_rng(seed, "distance/union_product");
        detail::FailureLog log;
        for (int i = 0; i < counts.chains; ++i) {
            u64 const p = i % 2 ? 3 : 7;
            int const n = static_cast<int>(rng.uniform(1, 2));
            IdealPresentation const z{n, {detail::random_mpoly(rng, n, 2, p, 2), detail::random_mpoly(rng, n, 2, p, 2)}};
            IdealPresentation const z2{n, {detail::random_mpoly(rng, n, 2, p, 2)}};
            auto const x = detail::random_rational_point(rng, n, p), y = detail::random_rational_point(rng, n, p);
            auto const u = check_union_product_distances(x, {}, z, z2, DistanceMode::union_of_sets, p);
            auto const pr = check_union_product_distances(x, y, z, z2, DistanceMode::product_of_sets, p);
            if (!u.holds || !pr.holds) {
                Json failed = u.failed;
                for (auto const & f : pr.failed) failed.push_back(f);
                log.add({{"instance", i}, {"p", p}, {"failed", failed}});
            }
        }
        log.finish(c, counts.chains);
    }));
    out.push_back(guarded_case("distance/membership", Json{{"count", counts.round_trips}}, [&](ReportCase & c) {
        Rng rng = detail::case_rng(seed, "distance/membership");
        detail::FailureLog log;
        int done = 0;
        while (done < counts.round_trips) {
            u64 const p = done % 2 ? 5 : 3;
            MPoly const f1 = detail::random_mpoly(rng, 2, 2, p, 3), f2 = detail::random_mpoly(rng, 2, 2, p, 3);
            if (f1.is_zero() || f2.is_zero()) continue;
            MPoly const f = MPoly::variable(2, 0) * f1 + MPoly::constant(2, static_cast<long>(p)) * f2;
            if (f.is_zero()) continue;
            int const cap = std::max(f.total_degree(), std::max(f1.total_degree() + 1, f2.total_degree()));
            MembershipResult const r = ideal_membership_bounded(f, {f1, f2}, cap, p);
            bool const identity = r.a[0] * f1 + r.a[1] * f2 == f;
            bool const bound = r.a_norm <= r.c * r.f_norm;
            if (!identity || !bound) {
                log.add({{"instance", done}, {"p", p}, {"identity", identity}, {"bound", bound}, {"c", r.c.to_string()}});
            }
            ++done;
        }
        log.finish(c, counts.round_trips);
    }));
    out.push_back(guarded_case("distance/prime_upper", Json{{"count", counts.dist_prime}}, [&](ReportCase & c) {
        Rng rng = detail::case_rng(seed, "distance/prime_upper");
        detail::FailureLog log;
        for (int i = 0; i < counts.dist_prime; ++i) {
            u64 const p = i % 2 ? 3 : 5;
            int const n = static_cast<int>(rng.uniform(1, 3));
            // A hypersurface through two integer sample points.
            std::vector<std::vector<mpq_class>> samples;
            for (int k = 0; k < 2; ++k) samples.push_back(detail::random_rational_point(rng, n, p));
            MPoly f = MPoly::constant(n, 1);
            for (auto const & y : samples) {
                int const j = static_cast<int>(rng.uniform(0, n - 1));
                f = f * (MPoly::variable(n, j) - MPoly::constant(n, y[j]));
            }
            IdealPresentation const ideal{n, {f}};
            auto const x = detail::random_rational_point(rng, n, p);
            PadicAbs const up = distance_prime_upper(x, samples, p);
            PadicAbs const d = distance(x, ideal, p);
            if (!(d <= up)) log.add({{"instance", i}, {"p", p}, {"dist", d.to_string()}, {"dist_prime", up.to_string()}});
        }
        log.finish(c, counts.dist_prime);
    }));
    return out;
}

/// All suites, in a fixed order.
inline ExperimentReport run_suites(SuiteCounts const & counts, ExperimentOptions const & opt = {}) {
    ExperimentReport rep;
    rep.experiment = "suites";
    rep.config = opt.to_json();
    for (u64 p : {2, 3, 5, 7}) rep.cases.push_back(lemma21_case(p, counts.lemma21, opt.seed));
    for (u64 p : {2, 3, 5}) rep.cases.push_back(lemma22_case(p, counts.lemma22, opt.seed));
    for (auto & c : quaternion_cases(counts, opt.seed)) rep.cases.push_back(std::move(c));
    for (auto & c : sieve_cases(counts, opt)) rep.cases.push_back(std::move(c));
    for (auto & c : distance_cases(counts, opt.seed)) rep.cases.push_back(std::move(c));
    return rep;
}

}  // namespace singmod
