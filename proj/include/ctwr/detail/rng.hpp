#pragma once

#include <cmath>
#include <cstdint>

namespace ctwr::detail {

// 64-bit finalizer with full avalanche (the SplitMix64 output function).
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    x = x ^ (x >> 31);
    return x;
}

// Counter-based substreams: every (seed, trial, draw index) triple maps to an
// independent 64-bit word, so trials can be generated in any order or in
// parallel and still produce identical values.
inline constexpr std::uint64_t kStreamStride = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t trial_state(std::uint64_t hashed_seed, std::uint64_t trial) {
    return mix64(hashed_seed + trial * kStreamStride);
}

inline std::uint64_t draw_bits(std::uint64_t trial_state, std::uint64_t draw_index) {
    return mix64(trial_state + draw_index * kStreamStride);
}

// Uniform in [0, 1) with 53 random mantissa bits.
inline double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Exponential with the given mean via inversion; log1p keeps precision for
// small uniforms and u = 0 maps to gain 0 (never -inf).
inline double exp_sample(std::uint64_t bits, double mean) {
    return -mean * std::log1p(-to_unit(bits));
}

} // namespace ctwr::detail
