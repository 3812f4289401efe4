#pragma once

#include <cstdint>
#include <random>

namespace agriseg {

// Reproducible across platforms: mt19937_64's output sequence is fixed by the
// standard, and bounded draws are done here rather than through
// std::uniform_int_distribution (whose algorithm is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        // reject the low (2^64 mod bound) values so every residue is equally likely
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

}  // namespace agriseg
