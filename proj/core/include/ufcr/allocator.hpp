#pragma once

#include <vector>

#include "ufcr/scenario.hpp"

namespace ufcr {

/// Subband-to-SM assignment plus per-subband powers. Positions index
/// Scenario::sm_subbands; every hole is owned by exactly one SM.
struct Allocation {
  std::vector<int> assign;          // hole position -> SM
  std::vector<double> powers;       // hole position -> watts
  std::vector<double> per_sm_rate;  // SM -> bit/s

  int n_sm() const { return static_cast<int>(assign.size()); }
};

/// One assignment made by the greedy procedure, with the provisional rates
/// as they stood just before it.
struct AllocationStep {
  enum class Phase { first_pass, fairness };
  Phase phase;
  int sm;
  int hole;
  std::vector<double> rates_before;
  std::vector<int> available_before;
};

/// Fairness-aware greedy subband assignment.
///
/// Every SM first takes its best free subband in index order; afterwards
/// the SM with the lowest provisional rate log2(1 + P g) (P = P_max/N_SM,
/// raw |H|^2) picks its best free subband until none remain. Ties go to
/// the lowest subband, then the lowest SM index. `trace`, when given,
/// receives every step. Throws std::invalid_argument if k_sm > N_SM.
Allocation allocate_subbands(const ChannelSet& channels, const Scenario& scenario, int k_sm,
                             std::vector<AllocationStep>* trace = nullptr);

/// Noise-normalised gain of the owning SM per hole:
/// |H_{assign(n), n}|^2 / (sigma^2 + J).
std::vector<double> aggregate_gains(const Allocation& allocation, const ChannelSet& channels,
                                    const Scenario& scenario);

/// Fills per_sm_rate from the current powers.
void update_sm_rates(Allocation& allocation, const std::vector<double>& gains,
                     double delta_f_hz, int k_sm);

}  // namespace ufcr
