#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace repsim {

// splitmix64 step, used to derive independent per-node streams from one master seed
inline uint64_t mix_seed(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b = 0) {
    return mix_seed(mix_seed(master ^ mix_seed(a)) ^ mix_seed(b + 0x6a09e667f3bcc909ULL));
}

/**
 * Deterministic random stream. Wraps mt19937_64 but converts to doubles with
 * fixed arithmetic instead of std distributions, so sequences are pinned by
 * this code alone and identical for identical seeds.
 */
class Rng {
public:
    explicit Rng(uint64_t seed = 1) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    /** Uniform in [0, 1). */
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /** Uniform in [lo, hi). */
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /** Uniform in (lo, hi]: flipped half-open interval, for draws that must stay positive. */
    double uniform_pos(double lo, double hi) {
        return hi - (hi - lo) * uniform01();
    }

    /** Uniform integer in [lo, hi] inclusive. */
    int64_t uniform_int(int64_t lo, int64_t hi) {
        const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        // modulo bias is ~2^-40 for the small spans used here
        return lo + static_cast<int64_t>(eng_() % span);
    }

    /** Exponential with the given rate (mean 1/rate), via inverse CDF. */
    double exponential(double rate) {
        return -std::log(1.0 - uniform01()) / rate;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace repsim
