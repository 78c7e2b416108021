#pragma once

#include <cstdint>
#include <random>

namespace sightglow {

/// Seeded generator with a platform-independent mapping to doubles.
///
/// std::mt19937_64 output is fixed by the standard; the distribution
/// adaptors are not, so they are avoided here.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1).
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    /// Uniform in [0, bound). bound must be nonzero.
    std::uint64_t below(std::uint64_t bound) {
        // Rejection keeps the draw unbiased.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v = engine_();
        while (v >= limit) {
            v = engine_();
        }
        return v % bound;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace sightglow
