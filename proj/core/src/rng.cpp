#include "rumor/rng.hpp"

#include <cmath>
#include <numbers>

namespace rumor {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept
{
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

// Uniform in (0, 1] with 53 random bits, so log() below is always finite.
inline double to_unit_open_closed(std::uint32_t hi, std::uint32_t lo) noexcept
{
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) noexcept
{
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

std::array<double, kCompartments> unit_normals(std::uint64_t seed, std::uint64_t step_index) noexcept
{
    const Philox4x32::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    const auto step_lo = static_cast<std::uint32_t>(step_index);
    const auto step_hi = static_cast<std::uint32_t>(step_index >> 32);

    std::array<double, kCompartments> out{};
    for (std::uint32_t b = 0; b < 3; ++b) {
        const auto words = Philox4x32::block({step_lo, step_hi, b, 0}, key);
        const double u1 = to_unit_open_closed(words[0], words[1]);
        const double u2 = to_unit_open_closed(words[2], words[3]);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        out[2 * b] = radius * std::cos(angle);
        out[2 * b + 1] = radius * std::sin(angle);
    }
    return out;
}

std::array<double, kCompartments> wiener_increments(std::uint64_t seed, std::uint64_t step_index,
                                                    double step_size) noexcept
{
    auto z = unit_normals(seed, step_index);
    const double scale = std::sqrt(step_size);
    for (double& v : z) v *= scale;
    return z;
}

}  // namespace rumor
