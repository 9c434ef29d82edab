#pragma once

#include <cstdint>
#include <string>

namespace tasr {

/// Counter-based SplitMix64 streams. Every consumer derives its own stream
/// from (base_seed, purpose tag, ids...), so draw order never depends on
/// scheduling and identical configs reproduce bit-identical runs anywhere.
struct Rng {
    uint64_t state;

    static uint64_t mix(uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static uint64_t hash_tag(const std::string& tag) {
        uint64_t h = 1469598103934665603ULL;  // FNV-1a
        for (unsigned char c : tag) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        return h;
    }

    explicit Rng(uint64_t seed) : state(seed) {}

    static Rng stream(uint64_t base_seed, const std::string& purpose, uint64_t a = 0, uint64_t b = 0,
                      uint64_t c = 0) {
        uint64_t s = mix(base_seed ^ hash_tag(purpose));
        s = mix(s ^ (a * 0x9e3779b97f4a7c15ULL + 1));
        s = mix(s ^ (b * 0xc2b2ae3d27d4eb4fULL + 2));
        s = mix(s ^ (c * 0x165667b19e3779f9ULL + 3));
        return Rng(s);
    }

    uint64_t next_u64() {
        state += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// uniform in [0,1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// uniform integer in [0, n)
    uint64_t next_below(uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

    bool bernoulli(double p) {
        if (p <= 0) return false;
        if (p >= 1) return true;
        return next_double() < p;
    }
};

}  // namespace tasr
