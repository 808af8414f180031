#include "ufcr/oracle.hpp"

#include <stdexcept>

#include "ufcr/power.hpp"

namespace ufcr {

OracleResult exhaustive_best(const ChannelSet& channels, const Scenario& scenario, int k_sm,
                             const InterferenceFactors& omega, std::uint64_t cap) {
  const int n_sm = scenario.n_sm();
  if (k_sm < 1) throw std::invalid_argument("need at least one SM");
  if (channels.k_sm() != k_sm || channels.n_sm() != n_sm || omega.n_sm() != n_sm)
    throw std::invalid_argument("oracle inputs disagree on dimensions");

  std::uint64_t total = 1;
  for (int n = 0; n < n_sm; ++n) {
    if (total > cap / static_cast<std::uint64_t>(k_sm))
      throw std::length_error("assignment space exceeds the enumeration cap");
    total *= static_cast<std::uint64_t>(k_sm);
  }
  if (total > cap) throw std::length_error("assignment space exceeds the enumeration cap");

  PowerProblem problem;
  problem.g.assign(static_cast<std::size_t>(n_sm), 0.0);
  problem.omega = omega.omega;
  problem.p_max = scenario.p_max_watts;
  problem.i_th = scenario.i_th_watts;
  problem.delta_f_hz = scenario.delta_f_hz;
  const double denom = scenario.noise_variance + scenario.pu_to_sm_interference_watts;

  OracleResult best;
  best.best_capacity = -1.0;
  std::vector<int> digits(static_cast<std::size_t>(n_sm), 0);
  for (std::uint64_t code = 0; code < total; ++code) {
    for (int n = 0; n < n_sm; ++n) problem.g[n] = channels.g_ss(digits[n], n) / denom;
    const auto wf = dual_waterfilling(problem);
    if (!wf.ok()) throw std::runtime_error("water-filling failed inside the oracle");
    const double c = capacity(wf.powers, problem.g, problem.delta_f_hz);
    if (c > best.best_capacity) {
      best.best_capacity = c;
      best.best_allocation.assign = digits;
      best.best_allocation.powers = wf.powers;
    }
    for (int n = 0; n < n_sm; ++n) {  // next mixed-radix code
      if (++digits[n] < k_sm) break;
      digits[n] = 0;
    }
  }
  update_sm_rates(best.best_allocation, aggregate_gains(best.best_allocation, channels, scenario),
                  scenario.delta_f_hz, k_sm);
  best.assignments_enumerated = total;
  return best;
}

}  // namespace ufcr
