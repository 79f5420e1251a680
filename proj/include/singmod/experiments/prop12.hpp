#pragma once

// CM points very close to 0 in Q_p: for d = 3x^2 + 4p^(2n+1) the class
// polynomial H_{-d} has a root of p-adic valuation at least n + 1.
// Certified through the Newton polygon of H_{-d}; at supersingular p the
// roots need not lie in an unramified extension, the polygon sees their
// valuations anyway.

#include <cmath>
#include <cstdio>
#include <optional>

#include "singmod/cm/class_group.hpp"
#include "singmod/cm/hilbert.hpp"
#include "singmod/cm/singular_moduli.hpp"
#include "singmod/experiments/options.hpp"
#include "singmod/experiments/report.hpp"
#include "singmod/padic/polynomial.hpp"
#include "singmod/sieve/squarefree.hpp"

namespace singmod {

inline Json newton_polygon_json(NewtonPolygon const & np) {
    Json segs = Json::array();
    for (auto const & s : np.segments()) segs.push_back({{"slope", exact(s.slope)}, {"length", s.length}});
    return segs;
}

inline std::string decimal(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline ExperimentReport run_prop_approximate(u64 p, long n_max, ExperimentOptions const & opt = {}) {
    if (p < 3 || !is_prime(p) || p % 3 != 2) throw domain_error("p must be an odd prime with p = 2 mod 3");
    if (n_max < 1) throw domain_error("n_max must be at least 1");
    ExperimentReport rep;
    rep.experiment = "prop12";
    rep.config = opt.to_json();
    rep.config["p"] = p;
    rep.config["n_max"] = n_max;
    std::optional<double> running_max;
    for (long n = 1; n <= n_max; ++n) {
        rep.cases.push_back(guarded_case("n=" + std::to_string(n), Json{{"p", p}, {"n", n}}, [&](ReportCase & c) {
            SieveConfig cfg;
            cfg.p = p;
            cfg.n = n;
            AdmissibleX const ax = minimal_admissible_x(cfg);
            long long const d = static_cast<long long>(ax.f);
            Json fac = Json::array();
            for (auto const & [q, e] : ax.factorization) fac.push_back({{"prime", q}, {"exponent", e}});
            c.values["x"] = ax.x;
            c.values["d"] = d;
            c.values["factorization"] = fac;
            if (!is_squarefree(ax.f)) throw validation_error("d squarefree", "d = " + std::to_string(d) + " is not squarefree");
            if ((-d % 4 + 4) % 4 != 1 || !is_fundamental_discriminant(-d)) {
                throw validation_error("-d fundamental", "-d = " + std::to_string(-d) + " is not a fundamental discriminant");
            }
            if (d > opt.max_abs_d) throw resource_error("|d| = " + std::to_string(d) + " above the cap " + std::to_string(opt.max_abs_d));
            ClassGroup const g(-d);
            c.values["class_number"] = g.class_number();
            c.values["reduction"] = to_string(reduction_type(-d, p));
            IntegerPolynomial const h = hilbert_class_poly(-d, opt.hcp());
            NewtonPolygon const np = newton_polygon(h, p);
            mpq_class const v = np.max_root_valuation();
            mpq_class const threshold = n + 1;
            c.values["newton_polygon"] = newton_polygon_json(np);
            c.values["max_root_valuation"] = exact(v);
            c.values["threshold"] = exact(threshold);
            // c = sqrt(d) p^(-v); c < 1 iff d^den(2v) < p^num(2v).
            mpq_class two_v = 2 * v;
            two_v.canonicalize();
            mpz_class lhs, rhs;
            mpz_pow_ui(lhs.get_mpz_t(), mpz_class(static_cast<long>(d)).get_mpz_t(), two_v.get_den().get_ui());
            mpz_ui_pow_ui(rhs.get_mpz_t(), p, two_v.get_num().get_ui());
            double const cval = std::exp(0.5 * std::log(static_cast<double>(d)) - v.get_d() * std::log(static_cast<double>(p)));
            running_max = running_max ? std::max(*running_max, cval) : cval;
            c.values["c_monitor"] = {{"c_squared", "d * p^(" + exact(mpq_class(-two_v)) + ")"},
                                     {"c_below_one", lhs < rhs},
                                     {"approx", decimal(cval)},
                                     {"running_max_approx", decimal(*running_max)}};
            c.verdict = v >= threshold ? Verdict::pass : Verdict::fail;
            if (c.verdict == Verdict::fail) c.notes = "no root of valuation >= n + 1";
        }));
    }
    return rep;
}

}  // namespace singmod
