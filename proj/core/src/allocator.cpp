#include "ufcr/allocator.hpp"

#include <cmath>
#include <stdexcept>

namespace ufcr {

namespace {

int best_free_hole(const ChannelSet& ch, int sm, const std::vector<bool>& taken) {
  int best = -1;
  for (int n = 0; n < ch.n_sm(); ++n) {
    if (taken[n]) continue;
    if (best < 0 || ch.g_ss(sm, n) > ch.g_ss(sm, best)) best = n;
  }
  return best;
}

std::vector<int> free_list(const std::vector<bool>& taken) {
  std::vector<int> out;
  for (std::size_t n = 0; n < taken.size(); ++n)
    if (!taken[n]) out.push_back(static_cast<int>(n));
  return out;
}

}  // namespace

Allocation allocate_subbands(const ChannelSet& channels, const Scenario& scenario, int k_sm,
                             std::vector<AllocationStep>* trace) {
  const int n_sm = scenario.n_sm();
  if (k_sm < 1) throw std::invalid_argument("need at least one SM");
  if (channels.k_sm() != k_sm || channels.n_sm() != n_sm)
    throw std::invalid_argument("channel table does not match k_sm / hole count");
  if (k_sm > n_sm) throw std::invalid_argument("more SMs than spectrum holes");

  const double provisional_power = scenario.p_max_watts / n_sm;
  std::vector<double> rate(static_cast<std::size_t>(k_sm), 0.0);
  std::vector<bool> taken(static_cast<std::size_t>(n_sm), false);

  Allocation out;
  out.assign.assign(static_cast<std::size_t>(n_sm), -1);
  out.powers.assign(static_cast<std::size_t>(n_sm), 0.0);
  out.per_sm_rate.assign(static_cast<std::size_t>(k_sm), 0.0);

  auto give = [&](AllocationStep::Phase phase, int sm) {
    const int hole = best_free_hole(channels, sm, taken);
    if (trace) trace->push_back({phase, sm, hole, rate, free_list(taken)});
    out.assign[hole] = sm;
    taken[hole] = true;
    rate[sm] += std::log2(1.0 + provisional_power * channels.g_ss(sm, hole));
  };

  for (int k = 0; k < k_sm; ++k) give(AllocationStep::Phase::first_pass, k);

  for (int remaining = n_sm - k_sm; remaining > 0; --remaining) {
    int neediest = 0;
    for (int k = 1; k < k_sm; ++k)
      if (rate[k] < rate[neediest]) neediest = k;
    give(AllocationStep::Phase::fairness, neediest);
  }
  return out;
}

std::vector<double> aggregate_gains(const Allocation& allocation, const ChannelSet& channels,
                                    const Scenario& scenario) {
  if (allocation.n_sm() != channels.n_sm())
    throw std::invalid_argument("allocation does not match the channel table");
  const double denom = scenario.noise_variance + scenario.pu_to_sm_interference_watts;
  std::vector<double> g(allocation.assign.size());
  for (std::size_t n = 0; n < g.size(); ++n) {
    const int k = allocation.assign[n];
    if (k < 0 || k >= channels.k_sm()) throw std::invalid_argument("hole left unassigned");
    g[n] = channels.g_ss(k, static_cast<int>(n)) / denom;
  }
  return g;
}

void update_sm_rates(Allocation& allocation, const std::vector<double>& gains,
                     double delta_f_hz, int k_sm) {
  allocation.per_sm_rate.assign(static_cast<std::size_t>(k_sm), 0.0);
  for (std::size_t n = 0; n < allocation.assign.size(); ++n)
    allocation.per_sm_rate[allocation.assign[n]] +=
        delta_f_hz * std::log2(1.0 + allocation.powers[n] * gains[n]);
}

}  // namespace ufcr
