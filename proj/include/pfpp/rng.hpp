#pragma once

#include <cmath>
#include <cstdint>

namespace pfpp {

// SplitMix64 finalizer; bijective on 64-bit words.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Counter-based stream: output n is a hash of (key, n), so draws depend only on
// (seed, stream, position). Streams can be consumed in any order across threads
// and still replay byte-identically.
class CounterRng {
public:
    CounterRng(uint64_t seed, uint64_t stream)
        : key_(mix64(seed ^ mix64(stream ^ 0x5851f42d4c957f2dull))) {}

    uint64_t next_u64() { return mix64(key_ + counter_++ * 0x9e3779b97f4a7c15ull); }

    // Uniform in [0, 1), 53 significant bits.
    double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller on two fresh uniforms.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_uniform();
        while (u1 <= 0.0) u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

private:
    uint64_t key_;
    uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace pfpp
