#pragma once

// Counter-based seeding plus a small generator for per-trial streams.
// Every random draw in the library derives from (master seed, index) pairs so
// results never depend on thread scheduling.

#include <cstdint>
#include <limits>

namespace fwsn {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent substream seed for item `index` of a run seeded by `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(master ^ mix64(index + 0x9e3779b97f4a7c15ULL));
}

// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// SplitMix64; satisfies UniformRandomBitGenerator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    constexpr explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    constexpr double uniform() noexcept { return to_unit((*this)()); }

private:
    std::uint64_t state_;
};

// Uniform draw attached to an unordered pair, so a link coin is the same no
// matter which radius or traversal order asks for it.
double pair_uniform(std::uint64_t seed, std::uint32_t i, std::uint32_t j) noexcept;

}  // namespace fwsn
