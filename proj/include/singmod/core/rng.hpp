#pragma once

#include <cstdint>
#include <random>

namespace singmod {

/// Seeded generator with draws that do not depend on the standard
/// library's distribution implementations, so reports are reproducible
/// across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [lo, hi].
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        auto const span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(next());
        std::uint64_t const limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t r;
        do {
            r = next();
        } while (r >= limit);
        return lo + static_cast<std::int64_t>(r % span);
    }

    bool coin() { return (next() >> 63) != 0; }

    Rng split() { return Rng(next() ^ 0x9e3779b97f4a7c15ULL); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace singmod
