#pragma once

#include <array>
#include <cstdint>

namespace sonde {

/// Counter-based random number generation (Philox4x32-10).
///
/// Every draw is a pure function of (seed, replication, mode, draw index),
/// so Monte Carlo campaigns produce identical output regardless of how
/// replications are scheduled across workers, and a truncated mode range
/// can be extended later without disturbing earlier modes.
namespace rng {

/// One Philox4x32-10 block: 128-bit counter, 64-bit key, 128-bit output.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key);

/// Uniform draw in the open interval (0, 1) with 53 random bits.
double uniform(std::uint64_t seed, std::uint32_t replication, std::uint32_t mode,
               std::uint32_t draw = 0);

/// Standard normal draw via the inverse-CDF transform of uniform().
double standard_normal(std::uint64_t seed, std::uint32_t replication, std::uint32_t mode,
                       std::uint32_t draw = 0);

}  // namespace rng

}  // namespace sonde
