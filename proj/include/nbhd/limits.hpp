#pragma once

#include <cstdint>

namespace nbhd {

/// Returns `default_limit`, lowered (never raised) by the NBHD_MAX_STATES
/// environment variable when it holds a positive integer.
std::uint64_t effective_limit(std::uint64_t default_limit);

inline constexpr std::uint64_t kMaxCartesianProduct = 1'000'000;
inline constexpr std::size_t kMaxGroupSize = 8;
inline constexpr std::size_t kMaxAllSubsetsWorlds = 6;
inline constexpr std::size_t kMaxWorlds = 64;

}  // namespace nbhd
