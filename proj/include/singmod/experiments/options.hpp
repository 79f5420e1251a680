#pragma once

#include <cstdint>
#include <string>

#include "singmod/cm/hilbert.hpp"
#include "singmod/core/errors.hpp"
#include "singmod/core/parallel.hpp"
#include "singmod/experiments/report.hpp"

namespace singmod {

/// Settings shared by all experiments. Caps are resource limits: work
/// beyond them raises resource_error and the case is reported as skipped.
struct ExperimentOptions {
    std::uint64_t seed = 42;
    long precision = 20;          // p-adic digits
    long max_precision = 64;
    long long max_abs_d = 50000;
    u64 max_y = 100'000'000;
    std::string cache_dir;
    unsigned threads = 0;         // 0 = hardware concurrency

    unsigned thread_count() const { return threads == 0 ? default_thread_count() : threads; }

    long checked_precision() const {
        if (precision < 1) throw domain_error("precision must be positive");
        if (precision > max_precision) {
            throw resource_error("precision " + std::to_string(precision) + " above the cap " + std::to_string(max_precision));
        }
        return precision;
    }

    HcpOptions hcp() const {
        HcpOptions o;
        o.max_abs_d = max_abs_d;
        o.cache_dir = cache_dir;
        o.threads = thread_count();
        return o;
    }

    /// Only settings that can change results; the thread count and cache
    /// location do not, so reports stay comparable across machines.
    Json to_json() const {
        return Json{{"seed", seed}, {"precision", precision}, {"max_precision", max_precision},
                    {"max_abs_d", max_abs_d}, {"max_y", max_y}};
    }
};

}  // namespace singmod
