#pragma once

#include <cmath>
#include <cstdint>

namespace gamband {

/*
 * Counter-based pseudo-random streams.
 *
 * Every draw is a pure hash of (key, step, slot), so a value depends only on
 * the identifying counters and never on how many draws happened before it.
 * Parallel sweeps therefore see exactly the same noise as serial ones, and a
 * trace can be reproduced from (master seed, run index) alone.
 */
class CounterRng {
public:
    CounterRng(std::uint64_t master_seed, std::uint64_t stream = 0)
        : key_(mix(mix(master_seed ^ 0x243f6a8885a308d3ULL) ^ stream)) {}

    /// Uniform draw in [0, 1).
    double uniform01(std::uint64_t step, std::uint32_t slot = 0) const {
        return static_cast<double>(word(step, slot) >> 11) * 0x1.0p-53;
    }

    /// Uniform draw in [lo, hi).
    double uniform(std::uint64_t step, double lo, double hi, std::uint32_t slot = 0) const {
        return lo + (hi - lo) * uniform01(step, slot);
    }

    /// Standard normal draw via Box-Muller; consumes uniform slots 2*slot and 2*slot+1.
    double gaussian(std::uint64_t step, std::uint32_t slot = 0) const {
        // u1 is shifted into (0, 1] so log() never sees zero.
        const double u1 =
            static_cast<double>((word(step, 2 * slot) >> 11) + 1) * 0x1.0p-53;
        const double u2 = uniform01(step, 2 * slot + 1);
        const double two_pi = 6.283185307179586;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

private:
    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t word(std::uint64_t step, std::uint32_t slot) const {
        return mix(key_ ^ mix(step + (static_cast<std::uint64_t>(slot) << 48)));
    }

    std::uint64_t key_;
};

}  // namespace gamband
