#pragma once

#include <cstdint>

namespace srb {

// Deterministic counter-based stream keyed by (seed, stream). Every draw is a
// pure function of (key, counter), so parallel trajectories get independent,
// scheduling-independent randomness and identical seeds reproduce bit-identical
// runs on any platform.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(mix(seed ^ 0x7315'9AF0'93D2'E14BULL) ^
                   (0x9E37'79B9'7F4A'7C15ULL * (stream + 1)))) {}

    std::uint64_t next_u64() { return mix(key_ + 0x9E37'79B9'7F4A'7C15ULL * ++counter_); }

    // uniform in [0, 1)
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // standard normal via Box-Muller; the second value of each pair is cached
    double next_normal();

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E37'79B9'7F4A'7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58'476D'1CE4'E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D0'49BB'1331'11EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace srb
