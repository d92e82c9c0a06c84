// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>

namespace geoforge {

// xoshiro256++ seeded through splitmix64. We roll our own instead of
// <random> because std:: distributions are implementation-defined and the
// whole pipeline must be byte-reproducible from a seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0,1), 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform index in [0,n). Lemire multiply-shift; slight modulo bias is
    // irrelevant at our n but the result is fully deterministic.
    std::uint64_t index(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    bool chance(double p) { return uniform() < p; }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t state_[4];
};

// Derives a child seed from a parent seed and a path of indices, so corpus
// instances get independent, reproducible streams.
inline std::uint64_t derive_seed(std::uint64_t root,
                                 std::initializer_list<std::uint64_t> path) {
    std::uint64_t x = root;
    Rng::splitmix64(x);
    for (std::uint64_t p : path) {
        x ^= p + 0x9e3779b97f4a7c15ULL + (x << 6) + (x >> 2);
        Rng::splitmix64(x);
    }
    return Rng::splitmix64(x);
}

}  // namespace geoforge
