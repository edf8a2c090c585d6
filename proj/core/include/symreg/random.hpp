#pragma once

// Seed handling. Every random object in the library is a pure function of a
// 64-bit seed: sequential streams come from std::mt19937_64 seeded through
// derive(), and order-independent draws (sketch hashes, Gaussian operator
// entries, row survival) are counter-based hashes of (key, index).

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>

namespace symreg::rng {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Independent child seed for stream `stream` of `seed`.
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) noexcept {
    return mix64(seed ^ mix64(stream ^ 0x243f6a8885a308d3ULL));
}

template <class... Rest>
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t stream, Rest... rest) noexcept {
    return derive(derive(seed, stream), static_cast<std::uint64_t>(rest)...);
}

/// Stream identifiers. Fixed values: changing one changes every draw below it.
enum Stream : std::uint64_t {
    kCountSketch = 1,
    kGaussian = 2,
    kLevelSurvival = 3,
    kRowNorms = 4,
    kProbes = 5,
    kSampling = 6,
    kComposed = 7,
    kSymSketch = 8,
    kRepetition = 9,
    kRestart = 10,
};

constexpr std::uint64_t hash_at(std::uint64_t key, std::uint64_t index) noexcept {
    return mix64(key ^ mix64(index + 0x6a09e667f3bcc909ULL));
}

/// Uniform on [0, 1) with 53 random bits.
constexpr double uniform_at(std::uint64_t key, std::uint64_t index) noexcept {
    return static_cast<double>(hash_at(key, index) >> 11) * 0x1.0p-53;
}

__extension__ using uint128 = unsigned __int128;

/// Uniform bucket in [0, m).
inline std::uint64_t bucket_at(std::uint64_t key, std::uint64_t index, std::uint64_t m) noexcept {
    return static_cast<std::uint64_t>((static_cast<uint128>(hash_at(key, index)) * m) >> 64);
}

/// Standard normal entry `index` of the stream `key` (Box-Muller over index pairs).
inline double normal_at(std::uint64_t key, std::uint64_t index) noexcept {
    const std::uint64_t pair = index & ~std::uint64_t{1};
    const double u1 = 1.0 - uniform_at(key, pair);
    const double u2 = uniform_at(key, pair + 1);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return (index & 1U) ? radius * std::sin(angle) : radius * std::cos(angle);
}

/// Fills `out` with normal_at(key, first), normal_at(key, first + 1), ...
/// computing each Box-Muller pair once.
inline void fill_normals(std::uint64_t key, std::uint64_t first, std::span<double> out) noexcept {
    std::size_t i = 0;
    std::uint64_t index = first;
    if ((index & 1U) && i < out.size()) out[i++] = normal_at(key, index++);
    for (; i + 1 < out.size(); i += 2, index += 2) {
        const double u1 = 1.0 - uniform_at(key, index);
        const double u2 = uniform_at(key, index + 1);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        out[i] = radius * std::cos(angle);
        out[i + 1] = radius * std::sin(angle);
    }
    if (i < out.size()) out[i] = normal_at(key, index);
}

/// Sequential engine for `stream` of `seed`.
inline std::mt19937_64 engine(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(derive(seed, stream));
}

} // namespace symreg::rng
