// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each criterion is judged from report verdicts plus the specific
// exact values it names.

#include <chrono>
#include <functional>
#include <iostream>

#include "singmod/experiments/prop12.hpp"
#include "singmod/experiments/rigidity_scan.hpp"
#include "singmod/experiments/selftest.hpp"
#include "singmod/experiments/suites.hpp"
#include "singmod/experiments/warmup.hpp"

using namespace singmod;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

bool all_pass(std::vector<ReportCase> const & cases) {
    return !cases.empty() && std::all_of(cases.begin(), cases.end(), [](ReportCase const & c) { return c.verdict == Verdict::pass; });
}

std::string failing_ids(std::vector<ReportCase> const & cases) {
    std::string s;
    for (auto const & c : cases) {
        if (c.verdict != Verdict::pass) s += " " + c.id + "=" + to_string(c.verdict) + (c.notes.empty() ? "" : "(" + c.notes + ")");
    }
    return s;
}

struct Outcome {
    bool ok = false;
    std::string detail;
};

Outcome prop12() {
    ExperimentOptions opt;
    auto const t = Clock::now();
    ExperimentReport const r = run_prop_approximate(5, 2, opt);
    double const secs = seconds_since(t);
    bool ok = all_pass(r.cases) && r.cases.size() == 2 && r.cases[0].values["d"] == 503 && secs < 310;
    std::string detail = "time " + decimal(secs) + " s;";
    for (auto const & c : r.cases) {
        if (c.verdict != Verdict::pass) continue;
        detail += " n=" + std::to_string(c.inputs["n"].get<long>()) + ": d=" + std::to_string(c.values["d"].get<long long>()) +
                  " h=" + std::to_string(c.values["class_number"].get<int>()) + " max val " +
                  c.values["max_root_valuation"].get<std::string>() + " >= " + c.values["threshold"].get<std::string>() + ";";
    }
    return {ok, detail + failing_ids(r.cases)};
}

Outcome warmup() {
    auto const t = Clock::now();
    ExperimentReport const r = run_warmup_2adic({1, 3});
    double const secs = seconds_since(t);
    bool ok = all_pass(r.cases) && r.cases.size() == 2 && secs < 30;
    if (ok) {
        auto const & a = r.cases[0].values;
        auto const & b = r.cases[1].values;
        ok = a["l"] == 11 && a["hcp_coefficients"] == Json::array({"32768", "1"}) && a["max_root_valuation"] == "15" &&
             a["valuation_sum"] == a["gross_zagier_sum"] && b["l"] == 59 && b["valuation_sum"] == b["gross_zagier_sum"] &&
             mpq_class(b["max_root_valuation"].get<std::string>()) >= 6;
    }
    std::string detail = "time " + decimal(secs) + " s;";
    for (auto const & c : r.cases) {
        if (c.verdict != Verdict::pass) continue;
        detail += " l=" + std::to_string(c.values["l"].get<long long>()) + " max val " + c.values["max_root_valuation"].get<std::string>() +
                  ", sum " + c.values["valuation_sum"].get<std::string>() + " = " + c.values["gross_zagier_sum"].get<std::string>() + ";";
    }
    return {ok, detail + failing_ids(r.cases)};
}

Outcome suite(std::function<std::vector<ReportCase>()> const & run, double limit) {
    auto const t = Clock::now();
    auto const cases = run();
    double const secs = seconds_since(t);
    long instances = 0;
    for (auto const & c : cases) {
        if (c.values.contains("instances")) instances += c.values["instances"].get<long>();
    }
    return {all_pass(cases) && secs < limit,
            std::to_string(cases.size()) + " cases, " + std::to_string(instances) + " instances, time " + decimal(secs) + " s" + failing_ids(cases)};
}

Outcome rigidity() {
    auto const t = Clock::now();
    ExperimentReport const r = run_rigidity_scan(5, 500, {1, 2});
    double const secs = seconds_since(t);
    long pairs = 0, certified = 0;
    for (auto const & c : r.cases) {
        if (!c.values.contains("pairs_checked")) continue;
        pairs += c.values["pairs_checked"].get<long>();
        certified += static_cast<long>(c.values["certified_zeros"].size());
    }
    return {all_pass(r.cases) && pairs > 0 && secs < 300,
            std::to_string(r.cases.size()) + " cases, " + std::to_string(pairs) + " pairs, " + std::to_string(certified) +
                " certified zeros, time " + decimal(secs) + " s" + failing_ids(r.cases)};
}

Outcome determinism() {
    ExperimentOptions opt;
    opt.seed = 42;
    std::string const a = run_selftest(opt).to_json().dump(2);
    std::string const b = run_selftest(opt).to_json().dump(2);
    return {a == b, std::to_string(a.size()) + " bytes per report"};
}

}  // namespace

int main() {
    SuiteCounts const full;
    std::vector<std::pair<std::string, std::function<Outcome()>>> const criteria{
        {"1 prop12 p=5 n=1,2", prop12},
        {"2 warmup n=1,3 with Gross-Zagier sum", warmup},
        {"3 log-order lemma, p=2,3,5,7", [&] {
             return suite([&] {
                 std::vector<ReportCase> v;
                 for (u64 p : {2, 3, 5, 7}) v.push_back(lemma21_case(p, full.lemma21, 42));
                 return v;
             }, 10);
         }},
        {"4 conjugator lemma, p=2,3,5", [&] {
             return suite([&] {
                 std::vector<ReportCase> v;
                 for (u64 p : {2, 3, 5}) v.push_back(lemma22_case(p, full.lemma22, 42));
                 return v;
             }, 30);
         }},
        {"5 quaternion order", [&] { return suite([&] { return quaternion_cases(full, 42); }, 10); }},
        {"6 square-free sieve", [&] { return suite([&] { return sieve_cases(full, ExperimentOptions{}); }, 120); }},
        {"7 rigidity scan p=5 |d|<=500 N=1,2", rigidity},
        {"8 distance machinery", [&] { return suite([&] { return distance_cases(full, 42); }, 60); }},
        {"9 selftest determinism", determinism},
    };
    int failed = 0;
    for (auto const & [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (std::exception const & e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failed += !o.ok;
        std::cout << (o.ok ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << std::endl;
    return failed == 0 ? 0 : 1;
}
