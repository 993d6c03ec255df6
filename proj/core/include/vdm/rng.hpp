#pragma once

#include <cmath>
#include <cstdint>

namespace vdm {

// Deterministic xoshiro256++ stream. Streams derived from (master seed,
// stream index) are stable across platforms and worker counts, which is what
// the reproducibility contract of the samplers rests on. Nothing here uses
// <random>: libstdc++/libc++ distributions do not produce identical sequences.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        // SplitMix64 expansion of the seed into the xoshiro state.
        std::uint64_t x = seed;
        for (auto& word : state_) {
            x += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            word = z ^ (z >> 31);
        }
    }

    static Rng stream(std::uint64_t master_seed, std::uint64_t stream_index) {
        return Rng(master_seed ^ (0xD1B54A32D192ED03ULL * (stream_index + 1)));
    }

    std::uint64_t next_u64() {
        auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
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

    // Uniform in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; one value per call, no caching, so the
    // consumed stream length is a simple function of the call count.
    double normal() {
        double u1;
        do {
            u1 = uniform();
        } while (u1 == 0.0);
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::uint64_t state_[4];
};

} // namespace vdm
