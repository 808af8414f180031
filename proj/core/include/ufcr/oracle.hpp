#pragma once

#include <cstdint>

#include "ufcr/allocator.hpp"
#include "ufcr/interference.hpp"
#include "ufcr/scenario.hpp"

namespace ufcr {

struct OracleResult {
  Allocation best_allocation;
  double best_capacity = 0.0;  // bit/s
  std::uint64_t assignments_enumerated = 0;
};

inline constexpr std::uint64_t kDefaultOracleCap = 1'000'000;

/// Joint optimum by brute force: every one of K_SM^N_SM assignments gets
/// its optimal powers from dual_waterfilling, and the best capacity wins
/// (first enumerated on ties, hole 0 being the least significant digit).
/// Throws std::length_error when K_SM^N_SM exceeds `cap`, and
/// std::runtime_error if a water-filling solve fails to converge.
OracleResult exhaustive_best(const ChannelSet& channels, const Scenario& scenario, int k_sm,
                             const InterferenceFactors& omega,
                             std::uint64_t cap = kDefaultOracleCap);

}  // namespace ufcr
