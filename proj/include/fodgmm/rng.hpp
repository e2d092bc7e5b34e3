#pragma once

// Counter-based random streams.
//
// Draw k of stream `key` is mix64(key + (k + 1) * 0x9E3779B97F4A7C15), i.e. the
// SplitMix64 sequence started at `key`; mix64 is the SplitMix64 finalizer
// (Steele, Lea & Flood 2014) with multipliers 0xBF58476D1CE4E5B9 and
// 0x94D049BB133111EB. Uniforms take the top 53 bits, shifted to the open
// interval (0, 1); standard normals are Phi^{-1}(u) = -sqrt(2) erfc^{-1}(2u).

#include <cstdint>

namespace fodgmm {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Key of child stream `index` under `parent`; distinct indices give
/// unrelated streams, so unit i's draws do not depend on how many units exist.
constexpr std::uint64_t substream_key(std::uint64_t parent, std::uint64_t index) noexcept {
    return mix64(parent ^ mix64(index + kGoldenGamma));
}

class CounterStream {
public:
    explicit constexpr CounterStream(std::uint64_t key) noexcept : key_(key) {}

    constexpr std::uint64_t next_u64() noexcept { return mix64(key_ + (++counter_) * kGoldenGamma); }
    /// Uniform on the open interval (0, 1).
    double next_uniform() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }
    /// Standard normal by inversion of the uniform draw.
    double next_normal();

    std::uint64_t draws() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Phi^{-1}(p) for p in (0, 1).
double normal_quantile(double p);

}  // namespace fodgmm
