#pragma once

#include <cstdint>

namespace contrastkit {

// splitmix64 finalizer. All seeded randomness in the library goes through
// this so results do not depend on the standard library's distributions.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) noexcept {
    return mix64(a ^ mix64(b));
}

// Exact mapping of the top 53 bits to [0, 1).
constexpr double to_unit(std::uint64_t x) noexcept {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    constexpr double uniform() noexcept { return to_unit(next()); }

    // Uniform integer in [0, bound). Multiply-shift; bias is below 2^-32 for
    // the bounds used here.
    std::uint64_t below(std::uint64_t bound) noexcept {
        if (bound == 0) return 0;
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

private:
    std::uint64_t state_;
};

// Counter-based split: the k-th child seed depends only on (seed, k).
constexpr std::uint64_t split_seed(std::uint64_t seed, std::uint64_t k) noexcept {
    return hash_combine(seed, k + 1);
}

}  // namespace contrastkit
