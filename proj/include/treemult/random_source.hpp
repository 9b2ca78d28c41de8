#pragma once

#include <array>
#include <cstdint>

namespace treemult {

// Deterministic, platform-independent PRNG: xoshiro256++ seeded through
// splitmix64. Identical seeds give identical streams everywhere; nothing in
// the draw path depends on libm or library-defined distributions.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& s : state_) s = split(x);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = kGamma;
    }

    // splitmix64 finalizer; the documented 64-bit mixing function.
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    // Stream for a parallel trial: master_seed XOR mix((index+1) * gamma).
    static RandomSource derived(std::uint64_t master_seed, std::uint64_t stream_index) {
        return RandomSource(master_seed ^ mix((stream_index + 1) * kGamma));
    }

    std::uint64_t next_u64() {
        auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
        std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound), unbiased via rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static std::uint64_t split(std::uint64_t& x) { return mix(x += kGamma); }

    std::array<std::uint64_t, 4> state_;
};

}  // namespace treemult
