#include "ufcr/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ufcr {

namespace {

constexpr std::uint64_t kLayoutStream = 0x4c41594f5554ULL;
constexpr std::uint64_t kChannelStream = 0x4348414e4e454cULL;

// Uniform composition of `total` into `parts` positive integers: choose
// parts-1 distinct cut points among 1..total-1.
std::vector<int> positive_composition(std::mt19937_64& rng, int total, int parts) {
  std::vector<int> cuts(static_cast<std::size_t>(total - 1));
  for (int i = 0; i < total - 1; ++i) cuts[i] = i + 1;
  std::vector<int> chosen;
  chosen.reserve(static_cast<std::size_t>(parts - 1));
  // partial Fisher-Yates so only the chosen prefix is drawn
  for (int i = 0; i < parts - 1; ++i) {
    std::uniform_int_distribution<int> pick(i, total - 2);
    std::swap(cuts[i], cuts[pick(rng)]);
    chosen.push_back(cuts[i]);
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<int> out;
  int prev = 0;
  for (int c : chosen) {
    out.push_back(c - prev);
    prev = c;
  }
  out.push_back(total - prev);
  return out;
}

// Uniform weak composition (parts >= 0) via stars and bars.
std::vector<int> weak_composition(std::mt19937_64& rng, int total, int parts) {
  auto shifted = positive_composition(rng, total + parts, parts);
  for (int& v : shifted) v -= 1;
  return shifted;
}

}  // namespace

double dbw_to_watts(double dbw) { return std::pow(10.0, dbw / 10.0); }
double watts_to_dbw(double watts) { return 10.0 * std::log10(watts); }

Scenario Scenario::from_layout(int n_total, std::vector<PuBand> bands) {
  Scenario s;
  s.n_total = n_total;
  s.pu_bands = std::move(bands);
  for (int n = 0; n < n_total; ++n) {
    const bool occupied = std::any_of(s.pu_bands.begin(), s.pu_bands.end(),
                                      [n](const PuBand& b) { return b.contains(n); });
    if (!occupied) s.sm_subbands.push_back(n);
  }
  s.validate();
  return s;
}

int Scenario::hole_position(int subband) const {
  const auto it = std::lower_bound(sm_subbands.begin(), sm_subbands.end(), subband);
  if (it == sm_subbands.end() || *it != subband) return -1;
  return static_cast<int>(it - sm_subbands.begin());
}

void Scenario::validate() const {
  if (n_total <= 0) throw std::invalid_argument("scenario needs n_total > 0");
  if (!(delta_f_hz > 0.0)) throw std::invalid_argument("subband width must be > 0");
  if (!(i_th_watts > 0.0)) throw std::invalid_argument("interference threshold must be > 0");
  if (!(p_max_watts > 0.0)) throw std::invalid_argument("power budget must be > 0");
  if (!(noise_variance > 0.0)) throw std::invalid_argument("noise variance must be > 0");
  if (pu_to_sm_interference_watts < 0.0)
    throw std::invalid_argument("PU-to-SM interference must be >= 0");

  std::vector<int> owner(static_cast<std::size_t>(n_total), -1);
  for (std::size_t l = 0; l < pu_bands.size(); ++l) {
    const auto& b = pu_bands[l];
    if (b.length < 1 || b.start < 0 || b.start + b.length > n_total)
      throw std::invalid_argument("PU band outside the subband grid");
    for (int n = b.start; n < b.start + b.length; ++n) {
      if (owner[n] >= 0) throw std::invalid_argument("PU bands overlap");
      owner[n] = static_cast<int>(l);
    }
  }
  std::vector<int> holes;
  for (int n = 0; n < n_total; ++n)
    if (owner[n] < 0) holes.push_back(n);
  if (holes != sm_subbands)
    throw std::invalid_argument("hole list is not the complement of the PU bands");
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed ^ (stream * 0x9e3779b97f4a7c15ULL);
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Scenario generate_spectrum(std::uint64_t seed, int n_total, int k_pu, IntRange pu_total) {
  if (k_pu < 1) throw std::invalid_argument("need at least one PU");
  if (pu_total.lo > pu_total.hi) throw std::invalid_argument("empty PU width range");
  if (pu_total.lo < k_pu)
    throw std::invalid_argument("PU width range too small for one subband per PU");
  if (pu_total.hi >= n_total)
    throw std::invalid_argument("PU width range leaves no spectrum hole");

  std::mt19937_64 rng(mix_seed(seed, kLayoutStream));
  const int occupied = std::uniform_int_distribution<int>(pu_total.lo, pu_total.hi)(rng);
  const auto widths = positive_composition(rng, occupied, k_pu);

  const int holes = n_total - occupied;
  std::vector<int> gaps(static_cast<std::size_t>(k_pu) + 1, 0);
  int spare = holes;
  if (holes >= k_pu - 1) {
    for (int g = 1; g < k_pu; ++g) gaps[g] = 1;
    spare -= k_pu - 1;
  }
  const auto extra = weak_composition(rng, spare, k_pu + 1);
  for (std::size_t g = 0; g < gaps.size(); ++g) gaps[g] += extra[g];

  std::vector<PuBand> bands;
  int cursor = gaps[0];
  for (int l = 0; l < k_pu; ++l) {
    bands.push_back({cursor, widths[l]});
    cursor += widths[l] + gaps[l + 1];
  }
  return Scenario::from_layout(n_total, std::move(bands));
}

ChannelSet generate_channels(std::uint64_t seed, const Scenario& scenario, int k_sm) {
  if (k_sm < 1) throw std::invalid_argument("need at least one SM");
  std::mt19937_64 rng(mix_seed(seed, kChannelStream));
  std::exponential_distribution<double> power_gain(1.0);

  ChannelSet ch;
  const int n_sm = scenario.n_sm();
  ch.g_sp.resize(n_sm, scenario.k_pu());
  for (int n = 0; n < n_sm; ++n)
    for (int l = 0; l < scenario.k_pu(); ++l) ch.g_sp(n, l) = power_gain(rng);
  ch.g_ss.resize(k_sm, n_sm);
  for (int k = 0; k < k_sm; ++k)
    for (int n = 0; n < n_sm; ++n) ch.g_ss(k, n) = power_gain(rng);
  return ch;
}

}  // namespace ufcr
