// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace chainlab::simnet {

/// splitmix64; used to derive independent sub-seeds from (seed, stream id)
/// so results do not depend on execution order or worker count.
inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
    uint64_t z = seed + stream * 0x9e3779b97f4a7c15ULL + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// mt19937_64 engine (bit-exact per the standard) with hand-rolled
/// distributions, because the standard library's distribution objects are not
/// bit-exact across implementations and every report here is golden-file
/// tested.
class SimRng {
public:
    explicit SimRng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Unbiased integer in [0, n) by rejection.
    uint64_t below(uint64_t n) {
        if (n == 0)
            return 0;
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    /// Exponential with the given mean; uniform01() < 1 keeps log() finite.
    double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

private:
    std::mt19937_64 eng_;
};

} // namespace chainlab::simnet
