#pragma once

#include "rumor/model.hpp"

#include <array>
#include <cstdint>

namespace rumor {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
/// Output is a pure function of (key, counter).
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter counter, Key key) noexcept;
};

/// SplitMix64 finalizer: a bijection on 64-bit integers.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept
{
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of stream `k` under `base_seed`:
///   splitmix64(base_seed + (k + 1) * 0x9E3779B97F4A7C15) (mod 2^64).
/// Injective in k for a fixed base, since the multiplier is odd and the
/// finalizer is a bijection.
constexpr std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t k) noexcept
{
    return splitmix64(base_seed + (k + 1) * 0x9E3779B97F4A7C15ULL);
}

/// Six independent standard normal draws for step `step_index` of the stream `seed`.
/// Three Philox blocks (counter = {step lo, step hi, block, 0}, key = seed) give
/// six 53-bit uniforms, paired through Box-Muller.
std::array<double, kCompartments> unit_normals(std::uint64_t seed, std::uint64_t step_index) noexcept;

/// Wiener increments over one step of length `step_size`: sqrt(step_size) * unit_normals.
std::array<double, kCompartments> wiener_increments(std::uint64_t seed, std::uint64_t step_index,
                                                    double step_size = 1.0) noexcept;

}  // namespace rumor
