#pragma once

// Scan of distinct ordinary singular moduli over Q_p^ur: ord_p Phi_N(x1, x2)
// stays at or below 6 Psi(N) / (p - 1) unless Phi_N(x1, x2) = 0.
//
// ord_p is Frobenius invariant, so each pair is checked once up to the
// diagonal Frobenius action: x1 runs over orbit representatives and x2
// over all roots. Phi_N is symmetric, so pairs of discriminants are
// visited once.

#include <optional>

#include "singmod/cm/class_group.hpp"
#include "singmod/cm/singular_moduli.hpp"
#include "singmod/experiments/options.hpp"
#include "singmod/experiments/report.hpp"
#include "singmod/modular/modpoly.hpp"
#include "singmod/modular/rigidity.hpp"

namespace singmod {

inline constexpr int rigidity_max_residue_degree = 6;

struct ScanDiscriminant {
    long long d = 0;
    SingularModulusRecord record;
    std::vector<int> orbit_representatives;
    std::vector<int> orbit_sizes;
};

/// Groups roots into Frobenius orbits; every conjugate of a root must
/// appear among the roots.
inline void frobenius_orbits(ScanDiscriminant & s) {
    auto const & roots = s.record.roots;
    std::vector<bool> seen(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (seen[i]) continue;
        int const f = roots[i].degree();
        seen[i] = true;
        s.orbit_representatives.push_back(static_cast<int>(i));
        s.orbit_sizes.push_back(f);
        for (int t = 1; t < f; ++t) {
            PadicNumber const img = roots[i].frobenius(t);
            bool found = false;
            for (std::size_t j = 0; j < roots.size() && !found; ++j) {
                if (seen[j] || roots[j].degree() != f) continue;
                if (img.agrees_with(roots[j])) {
                    seen[j] = true;
                    found = true;
                }
            }
            if (!found) throw error("Frobenius orbit of a root of H_" + std::to_string(s.d) + " is incomplete");
        }
    }
}

inline ExperimentReport run_rigidity_scan(u64 p, long long d_cap, std::vector<int> const & levels, ExperimentOptions const & opt = {}) {
    if (p < 3 || !is_prime(p)) throw domain_error("p must be an odd prime");
    if (d_cap < 3) throw domain_error("d_cap must be at least 3");
    if (d_cap > opt.max_abs_d) throw resource_error("d_cap above the cap " + std::to_string(opt.max_abs_d));
    auto const supported = supported_levels();
    for (int N : levels) {
        if (std::find(supported.begin(), supported.end(), N) == supported.end()) {
            throw domain_error("no modular polynomial table for level " + std::to_string(N));
        }
    }
    long const precision = opt.checked_precision();
    ExperimentReport rep;
    rep.experiment = "rigidity";
    rep.config = opt.to_json();
    rep.config["p"] = p;
    rep.config["d_cap"] = d_cap;
    rep.config["levels"] = levels;
    rep.config["max_residue_degree"] = rigidity_max_residue_degree;

    std::vector<long long> ds;
    for (long long d : fundamental_discriminants(d_cap)) {
        if (d % static_cast<long long>(p) != 0 && reduction_type(d, p) == ReductionType::ordinary) ds.push_back(d);
    }
    std::vector<ScanDiscriminant> scan(ds.size());
    std::vector<std::string> failures(ds.size());
    HcpOptions hopt = opt.hcp();
    hopt.threads = 1;
    parallel_for(
        ds.size(),
        [&](std::size_t i) {
            try {
                scan[i].d = ds[i];
                scan[i].record = singular_moduli_at(ds[i], p, precision, rigidity_max_residue_degree, hopt);
                frobenius_orbits(scan[i]);
            } catch (std::exception const & e) {
                failures[i] = e.what();
            }
        },
        opt.thread_count());

    ResultantCertifier certifier;
    for (int N : levels) {
        for (std::size_t i = 0; i < scan.size(); ++i) {
            std::string const id = "N=" + std::to_string(N) + ",d=" + std::to_string(ds[i]);
            rep.cases.push_back(guarded_case(id, Json{{"p", p}, {"N", N}, {"d1", ds[i]}}, [&](ReportCase & c) {
                if (!failures[i].empty()) throw error("root extraction failed: " + failures[i]);
                auto const & s1 = scan[i];
                mpq_class threshold(6 * static_cast<long>(psi(static_cast<u64>(N))), static_cast<long>(p - 1));
                threshold.canonicalize();
                long const h = static_cast<long>(s1.record.hcp.degree());
                long const extracted = static_cast<long>(s1.record.roots.size());
                c.values["class_number"] = h;
                c.values["roots_extracted"] = extracted;
                c.values["frobenius_orbits"] = s1.orbit_representatives.size();
                c.values["threshold"] = exact(threshold);
                long checked = 0;
                std::optional<long> max_ord;
                Json certified = Json::array(), skipped = Json::array(), violations = Json::array();
                for (std::size_t j = i; j < scan.size(); ++j) {
                    if (!failures[j].empty()) {
                        skipped.push_back({{"d2", ds[j]}, {"reason", "root extraction failed"}});
                        continue;
                    }
                    auto const & s2 = scan[j];
                    for (int a : s1.orbit_representatives) {
                        CmPoint const x1{s1.d, s1.record.hcp, s1.record.roots[a]};
                        for (std::size_t b = 0; b < s2.record.roots.size(); ++b) {
                            if (j == i && static_cast<int>(b) == a) continue;
                            CmPoint const x2{s2.d, s2.record.hcp, s2.record.roots[b]};
                            Json const pair{{"d2", ds[j]}, {"root1", a}, {"root2", b}};
                            try {
                                RigidityReport const r = rigidity_threshold_check(x1, x2, N, p, certifier);
                                ++checked;
                                if (r.certified_zero) {
                                    Json e = pair;
                                    e["note"] = r.note;
                                    certified.push_back(e);
                                } else {
                                    max_ord = max_ord ? std::max(*max_ord, *r.ord) : *r.ord;
                                    if (!r.pass) {
                                        Json e = pair;
                                        e["ord"] = *r.ord;
                                        violations.push_back(e);
                                    }
                                }
                            } catch (precision_exhausted const & e) {
                                Json s = pair;
                                s["reason"] = e.what();
                                skipped.push_back(s);
                            }
                        }
                    }
                }
                c.values["pairs_checked"] = checked;
                c.values["max_ord"] = max_ord ? Json(*max_ord) : Json(nullptr);
                c.values["certified_zeros"] = certified;
                c.values["skipped_pairs"] = skipped;
                c.values["violations"] = violations;
                if (!violations.empty()) {
                    c.verdict = Verdict::fail;
                    c.notes = "uncertified valuation above the threshold";
                } else if (!skipped.empty()) {
                    c.verdict = Verdict::skipped;
                    c.notes = "some pairs could not be decided";
                } else {
                    c.verdict = Verdict::pass;
                }
                if (extracted < h) {
                    if (!c.notes.empty()) c.notes += "; ";
                    c.notes += std::to_string(h - extracted) + " roots have residue degree above " +
                               std::to_string(rigidity_max_residue_degree) + " and are not scanned";
                }
            }));
        }
    }
    return rep;
}

}  // namespace singmod
