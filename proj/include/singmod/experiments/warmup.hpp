#pragma once

// The 2-adic warm-up: for a prime l = 3x^2 + 2^(2+n) with l = 3 mod 8 the
// singular moduli of discriminant -l are 2-adically close to 0. Checked
// twice: the Newton polygon of H_{-l} at 2 (PASS-A), and the sum of all
// root valuations against the Gross-Zagier double sum over ideal classes
// (PASS-B).

#include "singmod/cm/class_group.hpp"
#include "singmod/cm/hilbert.hpp"
#include "singmod/experiments/options.hpp"
#include "singmod/experiments/prop12.hpp"
#include "singmod/experiments/report.hpp"
#include "singmod/padic/polynomial.hpp"

namespace singmod {

struct WarmupPrime {
    long x = 0;
    long long l = 0;
};

/// Least prime l = 3x^2 + 2^(2+n) with l = 3 mod 8, searching x >= 0 up
/// to l <= cap.
inline WarmupPrime warmup_prime(long n, long long cap) {
    if (n < 1 || n % 2 == 0) throw domain_error("n must be a positive odd integer");
    if (n > 60) throw resource_error("2^(2+n) does not fit in 64 bits");
    long long const t = 1LL << (2 + n);
    for (long x = 0;; ++x) {
        long long const l = 3LL * x * x + t;
        if (l > cap) throw search_exhausted("no prime 3x^2 + 2^" + std::to_string(2 + n) + " = 3 mod 8 up to " + std::to_string(cap));
        if (l >= 5 && l % 8 == 3 && is_prime(static_cast<u64>(l))) return {x, l};
    }
}

/// sum_{k >= 1} sum_x 2^omega(gcd(2, x)) r_B((3l - x^2) / 2^(2+k)) for the
/// class B, where r_B counts integral ideals of the given norm in B.
inline mpz_class gross_zagier_class_sum(ClassGroup const & g, int cls, long long l) {
    mpz_class total = 0;
    long long const three_l = 3 * l;
    for (int k = 1; (1LL << (2 + k)) <= three_l; ++k) {
        long long const den = 1LL << (2 + k);
        for (long long x = 0; x * x < three_l; ++x) {
            long long const num = three_l - x * x;
            if (num % den != 0) continue;
            long long const r = representation_count(g, cls, num / den);
            long const weight = x % 2 == 0 ? 2 : 1;
            total += mpz_class(static_cast<long>(r)) * weight * (x == 0 ? 1 : 2);  // x and -x
        }
    }
    return total;
}

inline ExperimentReport run_warmup_2adic(std::vector<long> const & ns, ExperimentOptions const & opt = {}) {
    ExperimentReport rep;
    rep.experiment = "warmup2";
    rep.config = opt.to_json();
    rep.config["n"] = ns;
    for (long n : ns) {
        rep.cases.push_back(guarded_case("n=" + std::to_string(n), Json{{"n", n}}, [&](ReportCase & c) {
            WarmupPrime const wp = warmup_prime(n, opt.max_abs_d);
            c.values["x"] = wp.x;
            c.values["l"] = wp.l;
            ClassGroup const g(-wp.l);
            c.values["class_number"] = g.class_number();
            IntegerPolynomial const h = hilbert_class_poly(-wp.l, opt.hcp());
            if (h.degree() <= 2) {
                Json coeffs = Json::array();
                for (auto const & a : h.coefficients()) coeffs.push_back(exact(a));
                c.values["hcp_coefficients"] = coeffs;
            }
            NewtonPolygon const np = newton_polygon(h, 2);
            mpq_class const vmax = np.max_root_valuation();
            mpq_class threshold(3 * (n + 1), 2);
            threshold.canonicalize();
            c.values["newton_polygon"] = newton_polygon_json(np);
            c.values["max_root_valuation"] = exact(vmax);
            c.values["threshold"] = exact(threshold);
            bool const pass_a = vmax >= threshold;
            // Summing over all classes A, the class of A^2 runs over the
            // squares with multiplicity.
            Json per_class = Json::array();
            mpq_class formula = 0;
            for (int i = 0; i < g.class_number(); ++i) {
                mpq_class const s = mpq_class(3, 2) * mpq_class(gross_zagier_class_sum(g, g.compose(i, i), wp.l));
                per_class.push_back({{"class", g.form(i).to_string()}, {"value", exact(s)}});
                formula += s;
            }
            mpq_class const vsum = np.valuation_sum();
            bool const pass_b = np.zero_multiplicity() == 0 && vsum == formula;
            c.values["per_class"] = per_class;
            c.values["valuation_sum"] = exact(vsum);
            c.values["gross_zagier_sum"] = exact(formula);
            c.values["pass_a"] = pass_a;
            c.values["pass_b"] = pass_b;
            c.verdict = pass_a && pass_b ? Verdict::pass : Verdict::fail;
            if (!pass_a) c.notes = "no root of valuation >= 3(n + 1)/2";
            if (!pass_b) c.notes += std::string(c.notes.empty() ? "" : "; ") + "aggregate Gross-Zagier identity fails";
        }));
    }
    return rep;
}

}  // namespace singmod
