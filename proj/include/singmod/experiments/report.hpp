#pragma once

// Experiment reports: a config echo, one entry per case with exact inputs
// and values, and a pass/fail/skip summary. Serialised as JSON (keys in
// insertion order) or as CSV with one row per case.

#include <gmpxx.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "singmod/core/arith.hpp"
#include "singmod/core/errors.hpp"

namespace singmod {

using Json = nlohmann::ordered_json;

enum class Verdict { pass, fail, skipped };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::fail: return "FAIL";
        case Verdict::skipped: return "SKIPPED";
    }
    return "?";
}

/// Exact values go into reports as strings: integers in decimal, rationals
/// as "num/den".
inline std::string exact(mpz_class const & z) { return z.get_str(); }
inline std::string exact(mpq_class const & q) { return to_string(q); }

struct ReportCase {
    std::string id;
    Json inputs = Json::object();
    Json values = Json::object();
    Verdict verdict = Verdict::pass;
    std::string notes;
};

struct ExperimentReport {
    std::string experiment;
    Json config = Json::object();
    std::vector<ReportCase> cases;
    std::optional<double> timing_ms;

    int count(Verdict v) const {
        int n = 0;
        for (auto const & c : cases) n += c.verdict == v;
        return n;
    }
    bool ok() const { return count(Verdict::fail) == 0; }

    void append(ExperimentReport const & other) {
        for (auto const & c : other.cases) cases.push_back(c);
    }

    Json to_json() const {
        Json j;
        j["experiment"] = experiment;
        j["config"] = config;
        Json cs = Json::array();
        for (auto const & c : cases) {
            Json e;
            e["id"] = c.id;
            e["inputs"] = c.inputs;
            e["values"] = c.values;
            e["verdict"] = to_string(c.verdict);
            e["notes"] = c.notes;
            cs.push_back(std::move(e));
        }
        j["cases"] = std::move(cs);
        j["summary"] = {{"pass", count(Verdict::pass)}, {"fail", count(Verdict::fail)}, {"skipped", count(Verdict::skipped)}};
        j["timing_ms"] = timing_ms ? Json(*timing_ms) : Json(nullptr);
        return j;
    }

    std::string to_csv() const {
        std::ostringstream out;
        out << "experiment,id,verdict,inputs,values,notes\n";
        for (auto const & c : cases) {
            out << csv_field(experiment) << ',' << csv_field(c.id) << ',' << to_string(c.verdict) << ','
                << csv_field(c.inputs.dump()) << ',' << csv_field(c.values.dump()) << ',' << csv_field(c.notes) << '\n';
        }
        return out.str();
    }

  private:
    static std::string csv_field(std::string const & s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string out = "\"";
        for (char ch : s) {
            if (ch == '"') out += '"';
            out += ch;
        }
        return out + "\"";
    }
};

/// Runs body and turns library errors into a skipped or failed case.
/// Resource and precision limits and undecided comparisons skip; anything
/// else fails.
template <typename Body>
ReportCase guarded_case(std::string id, Json inputs, Body && body) {
    ReportCase c;
    c.id = std::move(id);
    c.inputs = std::move(inputs);
    try {
        body(c);
    } catch (resource_error const & e) {
        c.verdict = Verdict::skipped;
        c.notes = std::string("resource limit: ") + e.what();
    } catch (precision_exhausted const & e) {
        c.verdict = Verdict::skipped;
        c.notes = std::string("precision exhausted: ") + e.what();
    } catch (search_exhausted const & e) {
        c.verdict = Verdict::skipped;
        c.notes = std::string("search exhausted: ") + e.what();
    } catch (inconclusive const & e) {
        c.verdict = Verdict::skipped;
        c.notes = std::string("inconclusive: ") + e.what();
    } catch (validation_error const & e) {
        c.verdict = Verdict::fail;
        c.values["invariant"] = e.invariant();
        c.notes = e.what();
    } catch (std::exception const & e) {
        c.verdict = Verdict::fail;
        c.notes = std::string("error: ") + e.what();
    }
    return c;
}

}  // namespace singmod
