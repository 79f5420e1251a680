// Command-line driver for the experiments. Writes one JSON or CSV report
// and exits 0 iff no case failed.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "singmod/experiments/options.hpp"
#include "singmod/experiments/prop12.hpp"
#include "singmod/experiments/report.hpp"
#include "singmod/experiments/rigidity_scan.hpp"
#include "singmod/experiments/selftest.hpp"
#include "singmod/experiments/sieve_run.hpp"
#include "singmod/experiments/warmup.hpp"

using namespace singmod;

int main(int argc, char ** argv) {
    CLI::App app{"Experiments on p-adic distances between singular moduli"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    ExperimentOptions opt;
    std::string out_path, format = "json", table_dir = default_table_dir();
    bool timing = false;
    app.add_option("--seed", opt.seed, "Seed for randomised suites")->capture_default_str();
    app.add_option("--precision", opt.precision, "p-adic digits for explicit roots")->capture_default_str();
    app.add_option("--max-precision", opt.max_precision, "Cap on --precision")->capture_default_str();
    app.add_option("--max-d", opt.max_abs_d, "Cap on |d| for class polynomials")->capture_default_str();
    app.add_option("--max-y", opt.max_y, "Cap on y for the sieve")->capture_default_str();
    app.add_option("--cache-dir", opt.cache_dir, "Directory for cached class polynomials (off when empty)");
    app.add_option("--threads", opt.threads, "Worker threads, 0 for all cores")->capture_default_str();
    app.add_option("--out", out_path, "Write the report here instead of stdout");
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app.add_flag("--timing", timing, "Record wall time in timing_ms");

    u64 p = 5;
    long n_max = 2, n = 1;
    long long d_cap = 500;
    u64 y = 1'000'000;
    std::vector<long> ns{1, 3};
    std::vector<int> levels{1, 2};

    auto * prop = app.add_subcommand("prop12", "CM points close to 0 via Newton polygons");
    prop->add_option("--p", p, "Prime, odd and 2 mod 3")->capture_default_str();
    prop->add_option("--nmax", n_max, "Largest n")->capture_default_str();

    auto * warm = app.add_subcommand("warmup2", "2-adic warm-up with the Gross-Zagier check");
    warm->add_option("--n", ns, "Odd n values")->delimiter(',')->capture_default_str();

    auto * rig = app.add_subcommand("rigidity", "Scan of Phi_N valuations between ordinary singular moduli");
    rig->add_option("--p", p, "Prime")->capture_default_str();
    rig->add_option("--dcap", d_cap, "Largest |d|")->capture_default_str();
    rig->add_option("--levels", levels, "Levels N")->delimiter(',')->capture_default_str();

    auto * sieve = app.add_subcommand("sieve", "Square-free values of 3x^2 + 4p^(2n+1)");
    sieve->add_option("--p", p, "Prime >= 5")->capture_default_str();
    sieve->add_option("--n", n, "Exponent parameter")->capture_default_str();
    sieve->add_option("--y", y, "Bound for N(y)")->capture_default_str();

    auto * self = app.add_subcommand("selftest", "All module checks at reduced sizes");
    self->add_option("--table-dir", table_dir, "Modular polynomial tables to validate");

    CLI11_PARSE(app, argc, argv);

    ExperimentReport rep;
    auto const start = std::chrono::steady_clock::now();
    try {
        if (*prop) rep = run_prop_approximate(p, n_max, opt);
        if (*warm) rep = run_warmup_2adic(ns, opt);
        if (*rig) rep = run_rigidity_scan(p, d_cap, levels, opt);
        if (*sieve) rep = run_sieve(p, n, y, opt);
        if (*self) rep = run_selftest(opt, table_dir);
    } catch (std::exception const & e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (timing) rep.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    std::string const text = format == "csv" ? rep.to_csv() : rep.to_json().dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return 2;
        }
        out << text;
    }
    std::cerr << rep.experiment << ": " << rep.count(Verdict::pass) << " pass, " << rep.count(Verdict::fail) << " fail, "
              << rep.count(Verdict::skipped) << " skipped\n";
    return rep.ok() ? 0 : 1;
}
