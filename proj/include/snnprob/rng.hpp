#pragma once

#include <cstdint>

namespace snnprob {

/// Counter-free mixing function (splitmix64 finalizer). Used to derive
/// stream keys from (seed, tag, id...) tuples so that every neuron and
/// every image gets its own statistically independent generator.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ mix64(b));
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix64(a ^ mix64(b ^ mix64(c)));
}

/// PCG32 (Melissa O'Neill's pcg32_random_r, XSH-RR output). 64-bit state,
/// 64-bit stream selector. Chosen because the algorithm is short enough to
/// pin down exactly: identical seeds reproduce identical sequences on every
/// platform, which the simulator's determinism contract depends on.
class Pcg32 {
public:
    Pcg32() { seed(0x853c49e6748fea9bULL, 0xda3e39cb94b95bdbULL); }

    Pcg32(std::uint64_t initstate, std::uint64_t initseq) { seed(initstate, initseq); }

    void seed(std::uint64_t initstate, std::uint64_t initseq) {
        state_ = 0u;
        inc_ = (initseq << 1u) | 1u;
        next_u32();
        state_ += initstate;
        next_u32();
    }

    std::uint32_t next_u32() {
        std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
    }

    std::uint64_t next_u64() {
        std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Unbiased uniform integer in [0, bound) (Lemire's multiply-shift
    /// rejection method). bound must be nonzero.
    std::uint32_t next_below(std::uint32_t bound) {
        std::uint64_t m = static_cast<std::uint64_t>(next_u32()) * bound;
        std::uint32_t lo = static_cast<std::uint32_t>(m);
        if (lo < bound) {
            std::uint32_t threshold = (-bound) % bound;
            while (lo < threshold) {
                m = static_cast<std::uint64_t>(next_u32()) * bound;
                lo = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    /// Uniform integer in [lo, hi], both ends inclusive.
    std::uint32_t next_between(std::uint32_t lo, std::uint32_t hi) {
        return lo + next_below(hi - lo + 1u);
    }

    bool operator==(const Pcg32& other) const = default;

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

/// Derives the generator for one keyed stream. Streams with distinct keys
/// are independent regardless of the order they are consumed in, so
/// per-neuron and per-image streams can be created lazily or in parallel.
inline Pcg32 make_stream(std::uint64_t seed, std::uint64_t key) {
    return Pcg32(mix64(seed, key), mix64(key, seed, 0x5eedULL));
}

inline Pcg32 make_stream(std::uint64_t seed, std::uint64_t key1, std::uint64_t key2) {
    return make_stream(mix64(seed, key1), key2);
}

} // namespace snnprob
