#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace symlab {

// Deterministic random number generation. Every consumer derives its own
// substream from (seed, tag, indices...), so results are independent of
// evaluation order and thread layout, and replay bit-exactly from the seed.

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t hash_str(const char* s) {
    // FNV-1a 64
    uint64_t h = 0xcbf29ce484222325ULL;
    for (; *s; ++s) {
        h ^= static_cast<unsigned char>(*s);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// xoshiro256++ seeded through splitmix64.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    // Substream keyed by a tag and up to three indices.
    static Rng stream(uint64_t seed, const char* tag, uint64_t i0 = 0, uint64_t i1 = 0,
                      uint64_t i2 = 0) {
        uint64_t sm = seed ^ (hash_str(tag) * 0x9e3779b97f4a7c15ULL);
        sm ^= splitmix64(sm) + i0;
        sm ^= splitmix64(sm) + i1;
        sm ^= splitmix64(sm) + i2;
        return Rng(splitmix64(sm));
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    uint64_t uniform_index(uint64_t n) { return next_u64() % n; }

    // Standard normal via Box-Muller (no cached spare; replay stays positional).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t s_[4];
};

}  // namespace symlab
