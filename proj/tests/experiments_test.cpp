#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "singmod/experiments/prop12.hpp"
#include "singmod/experiments/report.hpp"
#include "singmod/experiments/rigidity_scan.hpp"
#include "singmod/experiments/selftest.hpp"
#include "singmod/experiments/sieve_run.hpp"
#include "singmod/experiments/warmup.hpp"

using namespace singmod;

namespace {

std::filesystem::path corrupted_tables(std::string const & name) {
    namespace fs = std::filesystem;
    fs::path const dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    for (int level : supported_levels()) {
        std::string const file = "phi_" + std::to_string(level) + ".txt";
        fs::copy_file(fs::path(default_table_dir()) / file, dir / file);
    }
    // Change the coefficient 1488 of X^2 Y and X Y^2 alike: symmetry still
    // holds, the modular identity does not.
    std::ifstream in(dir / "phi_2.txt");
    std::stringstream ss;
    ss << in.rdbuf();
    in.close();
    std::string text = ss.str();
    for (std::size_t pos; (pos = text.find(" 1488\n")) != std::string::npos;) text.replace(pos, 6, " 1489\n");
    std::ofstream(dir / "phi_2.txt") << text;
    return dir;
}

ReportCase const & find_case(ExperimentReport const & r, std::string const & id) {
    for (auto const & c : r.cases) {
        if (c.id == id) return c;
    }
    throw std::runtime_error("no case " + id);
}

}  // namespace

TEST(Report, JsonSchemaAndCsv) {
    ExperimentReport r;
    r.experiment = "demo";
    r.config = {{"seed", 1}};
    ReportCase a;
    a.id = "a";
    a.values["v"] = exact(mpq_class(3, 2));
    a.notes = "with, comma";
    r.cases.push_back(a);
    ReportCase b;
    b.id = "b";
    b.verdict = Verdict::skipped;
    r.cases.push_back(b);
    Json const j = r.to_json();
    std::vector<std::string> keys;
    for (auto const & [k, v] : j.items()) keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"experiment", "config", "cases", "summary", "timing_ms"}));
    EXPECT_EQ(j["summary"]["pass"], 1);
    EXPECT_EQ(j["summary"]["skipped"], 1);
    EXPECT_TRUE(j["timing_ms"].is_null());
    EXPECT_EQ(j["cases"][0]["values"]["v"], "3/2");
    EXPECT_TRUE(r.ok());
    std::string const csv = r.to_csv();
    EXPECT_NE(csv.find("\"with, comma\""), std::string::npos);
    EXPECT_NE(csv.find("demo,b,SKIPPED"), std::string::npos);
}

TEST(Report, GuardedCaseVerdicts) {
    auto const skipped = guarded_case("s", Json::object(), [](ReportCase &) { throw resource_error("too big"); });
    EXPECT_EQ(skipped.verdict, Verdict::skipped);
    auto const undecided = guarded_case("u", Json::object(), [](ReportCase &) { throw inconclusive("straddles"); });
    EXPECT_EQ(undecided.verdict, Verdict::skipped);
    auto const invalid = guarded_case("v", Json::object(), [](ReportCase &) { throw validation_error("symmetry", "bad table"); });
    EXPECT_EQ(invalid.verdict, Verdict::fail);
    EXPECT_EQ(invalid.values["invariant"], "symmetry");
    auto const other = guarded_case("o", Json::object(), [](ReportCase &) { throw domain_error("nope"); });
    EXPECT_EQ(other.verdict, Verdict::fail);
}

TEST(Warmup, PrimeSearch) {
    auto const a = warmup_prime(1, 50000);
    EXPECT_EQ(a.x, 1);
    EXPECT_EQ(a.l, 11);
    auto const b = warmup_prime(3, 50000);  // 3 + 32 = 35 is not prime
    EXPECT_EQ(b.x, 3);
    EXPECT_EQ(b.l, 59);
    EXPECT_THROW(warmup_prime(2, 50000), domain_error);
    EXPECT_THROW(warmup_prime(3, 40), search_exhausted);
}

TEST(Warmup, GrossZagierSums) {
    ClassGroup const g(-11);
    EXPECT_EQ(gross_zagier_class_sum(g, g.compose(0, 0), 11), 10);  // (3/2) * 10 = 15
    auto const r = run_warmup_2adic({1, 3});
    ASSERT_EQ(r.cases.size(), 2u);
    for (auto const & c : r.cases) {
        EXPECT_EQ(c.verdict, Verdict::pass) << c.notes;
        EXPECT_EQ(c.values["valuation_sum"], c.values["gross_zagier_sum"]);
    }
    EXPECT_EQ(r.cases[0].values["max_root_valuation"], "15");
    EXPECT_EQ(r.cases[0].values["hcp_coefficients"], Json::array({"32768", "1"}));
    EXPECT_EQ(r.cases[1].values["l"], 59);
    ExperimentOptions small;
    small.max_abs_d = 40;
    auto const s = run_warmup_2adic({3}, small);
    EXPECT_EQ(s.cases[0].verdict, Verdict::skipped);
}

TEST(Prop12, FirstLevel) {
    auto const r = run_prop_approximate(5, 1);
    ASSERT_EQ(r.cases.size(), 1u);
    auto const & c = r.cases[0];
    EXPECT_EQ(c.verdict, Verdict::pass) << c.notes;
    EXPECT_EQ(c.values["d"], 503);
    EXPECT_EQ(c.values["class_number"], 21);
    EXPECT_EQ(c.values["threshold"], "2");
    EXPECT_GE(mpq_class(c.values["max_root_valuation"].get<std::string>()), 2);
    EXPECT_EQ(c.values["c_monitor"]["c_below_one"], true);
    EXPECT_THROW(run_prop_approximate(7, 1), domain_error);
    EXPECT_THROW(run_prop_approximate(5, 0), domain_error);
}

TEST(Prop12, CapSkipsLaterLevels) {
    ExperimentOptions opt;
    opt.max_abs_d = 1000;
    auto const r = run_prop_approximate(5, 2, opt);
    EXPECT_EQ(r.cases[0].verdict, Verdict::pass);
    EXPECT_EQ(r.cases[1].verdict, Verdict::skipped);
    EXPECT_EQ(r.cases[1].values["d"], 12503);
    EXPECT_TRUE(r.ok());
}

TEST(Rigidity, SmallScan) {
    auto const r = run_rigidity_scan(5, 100, {1, 2});
    EXPECT_TRUE(r.ok());
    long pairs = 0;
    for (auto const & c : r.cases) {
        EXPECT_EQ(c.verdict, Verdict::pass) << c.id << " " << c.notes;
        pairs += c.values["pairs_checked"].get<long>();
        if (!c.values["max_ord"].is_null()) {
            EXPECT_LE(mpq_class(c.values["max_ord"].get<long>()), mpq_class(c.values["threshold"].get<std::string>()));
        }
    }
    EXPECT_GT(pairs, 0);
    EXPECT_THROW(run_rigidity_scan(5, 100, {4}), domain_error);
    ExperimentOptions opt;
    opt.max_abs_d = 50;
    EXPECT_THROW(run_rigidity_scan(5, 100, {1}, opt), resource_error);
}

TEST(Rigidity, FrobeniusOrbitsPartitionRoots) {
    ScanDiscriminant s;
    s.d = -84;
    s.record = singular_moduli_at(-84, 5, 20, rigidity_max_residue_degree);
    frobenius_orbits(s);
    int total = 0;
    for (int f : s.orbit_sizes) total += f;
    EXPECT_EQ(total, static_cast<int>(s.record.roots.size()));
    EXPECT_EQ(s.record.roots.size(), 4u);
}

TEST(SieveRun, Report) {
    SieveRunOptions so;
    so.density_L = 1000;
    auto const r = run_sieve(5, 1, 100'000, {}, so);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(find_case(r, "count").values["brute"], find_case(r, "count").values["mobius"]);
    EXPECT_EQ(find_case(r, "admissible_x").values["f"], 503);
    EXPECT_THROW(run_sieve(5, 1, 502), domain_error);
    ExperimentOptions capped;
    capped.max_y = 10'000;
    EXPECT_EQ(find_case(run_sieve(5, 1, 100'000, capped, so), "count").verdict, Verdict::skipped);
}

TEST(Selftest, PassesAndIsDeterministic) {
    ExperimentOptions opt;
    opt.seed = 42;
    auto const a = run_selftest(opt);
    EXPECT_TRUE(a.ok());
    EXPECT_EQ(a.count(Verdict::skipped), 0);
    for (std::size_t i = 1; i < a.cases.size(); ++i) EXPECT_LT(a.cases[i - 1].id, a.cases[i].id);
    EXPECT_EQ(a.to_json().dump(), run_selftest(opt).to_json().dump());
    opt.seed = 43;
    EXPECT_NE(a.to_json().dump(), run_selftest(opt).to_json().dump());
}

TEST(Selftest, CorruptedTableFailsWithInvariant) {
    auto const dir = corrupted_tables("singmod_corrupt_tables");
    auto const r = run_selftest({}, dir.string());
    EXPECT_FALSE(r.ok());
    auto const & c = find_case(r, "tables/phi_2");
    EXPECT_EQ(c.verdict, Verdict::fail);
    EXPECT_EQ(c.values["invariant"], "modular-identity");
    EXPECT_EQ(find_case(r, "tables/phi_3").verdict, Verdict::pass);
    std::filesystem::remove_all(dir);
}
