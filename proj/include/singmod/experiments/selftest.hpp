#pragma once

// Every module's checks at reduced sizes, in one report. Cases are ordered
// by id, so two runs with the same seed produce identical documents.

#include <algorithm>
#include <fstream>
#include <sstream>

#include "singmod/experiments/options.hpp"
#include "singmod/experiments/prop12.hpp"
#include "singmod/experiments/report.hpp"
#include "singmod/experiments/rigidity_scan.hpp"
#include "singmod/experiments/sieve_run.hpp"
#include "singmod/experiments/suites.hpp"
#include "singmod/experiments/warmup.hpp"
#include "singmod/modular/modpoly.hpp"

namespace singmod {

inline ReportCase table_case(int level, std::string const & dir) {
    std::string const id = "tables/phi_" + std::to_string(level);
    return guarded_case(id, Json{{"level", level}}, [&](ReportCase & c) {
        std::string const path = dir + "/phi_" + std::to_string(level) + ".txt";
        std::ifstream in(path);
        if (!in) throw validation_error("table present", "cannot read " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        ModularPolynomial const phi = parse_modular_polynomial(level, ss.str());
        c.values["degree"] = phi.degree_x();
        c.values["psi"] = psi(static_cast<u64>(level));
        c.verdict = Verdict::pass;
    });
}

inline ExperimentReport run_selftest(ExperimentOptions const & opt = {}, std::string const & table_dir = default_table_dir()) {
    ExperimentReport rep;
    rep.experiment = "selftest";
    rep.config = opt.to_json();
    auto take = [&](std::string const & prefix, ExperimentReport const & r) {
        for (auto c : r.cases) {
            c.id = prefix + c.id;
            rep.cases.push_back(std::move(c));
        }
    };
    for (int level : supported_levels()) rep.cases.push_back(table_case(level, table_dir));
    take("", run_suites(SuiteCounts::reduced(), opt));
    take("prop12/", run_prop_approximate(5, 1, opt));
    take("warmup2/", run_warmup_2adic({1, 3}, opt));
    take("rigidity/", run_rigidity_scan(5, 100, {1, 2}, opt));
    SieveRunOptions so;
    so.density_L = 1000;
    take("sieve/run/", run_sieve(5, 1, 100'000, opt, so));
    std::stable_sort(rep.cases.begin(), rep.cases.end(), [](ReportCase const & a, ReportCase const & b) { return a.id < b.id; });
    return rep;
}

}  // namespace singmod
