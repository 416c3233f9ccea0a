// Copyright (c) 2026 the rff developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace rff {

// 64-bit finalizer (splitmix64 style): used to place per-sample streams at
// effectively independent points of the generator's additive walk.
inline std::uint64_t hash64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// splitmix64 generator. Implementation-defined-free, so identical
// (seed, index) pairs give identical draws on every platform, compiler and
// thread layout.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t s) : state(s) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
};

// Independent stream for Monte Carlo sample `index` under a run seed: the
// starting state is a hash of both, so streams of different samples are
// unrelated walks rather than shifted copies of one sequence.
inline SplitMix64 sample_stream(std::uint64_t seed, std::uint64_t index)
{
    return SplitMix64(hash64(seed) ^ hash64(hash64(index) + 0x6a09e667f3bcc909ULL));
}

}  // namespace rff
