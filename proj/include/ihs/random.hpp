#pragma once

#include <cstdint>

namespace ihs {

/// SplitMix64 (Steele, Lea & Flood 2014; constants as in Vigna's reference
/// implementation). All instance generation goes through this engine and
/// uniformBelow() so that seeds reproduce byte-identical instances on any
/// platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Independent child stream.
    SplitMix64 split() { return SplitMix64(next()); }

    /// Uniform integer in [0, bound), bound > 0. Rejection sampling on the
    /// low residues keeps the draw unbiased.
    std::uint64_t uniformBelow(std::uint64_t bound)
    {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform integer in [lo, hi].
    std::uint64_t uniformIn(std::uint64_t lo, std::uint64_t hi) { return lo + uniformBelow(hi - lo + 1); }

private:
    std::uint64_t state_;
};

}  // namespace ihs
