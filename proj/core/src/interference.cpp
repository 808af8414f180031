#include "ufcr/interference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ufcr/allocator.hpp"

namespace ufcr {

double spectral_distance(int subband, int pu, const Scenario& scenario) {
  if (pu < 0 || pu >= scenario.k_pu()) throw std::out_of_range("unknown PU index");
  if (scenario.hole_position(subband) < 0)
    throw std::out_of_range("subband is not a spectrum hole");
  const double hole_center = subband + 0.5;
  return std::abs(scenario.pu_bands[pu].center_index() - hole_center) * scenario.delta_f_hz;
}

double interference_factor(const PsdProfile& psd, double cross_gain, double distance_hz,
                           double pu_width_hz, int* points_used) {
  if (pu_width_hz < 0.0) throw std::invalid_argument("PU band width must be >= 0");
  if (cross_gain < 0.0) throw std::invalid_argument("cross gain must be >= 0");
  if (points_used) *points_used = 0;
  if (cross_gain == 0.0 || pu_width_hz == 0.0) return 0.0;

  const double support = psd.support_hz();
  const double lo = std::max(distance_hz - 0.5 * pu_width_hz, -support);
  const double hi = std::min(distance_hz + 0.5 * pu_width_hz, support);
  if (!(hi > lo)) return 0.0;

  const double span = hi - lo;
  // At least two Simpson nodes per grid cell and never fewer than 1025.
  auto intervals = static_cast<long>(std::ceil(2.0 * span / psd.grid_step_hz() - 1e-9));
  intervals = std::max<long>(intervals, kMinQuadraturePoints - 1);
  if (intervals % 2 != 0) ++intervals;
  const double h = span / static_cast<double>(intervals);

  double acc = psd.density(lo) + psd.density(hi);
  for (long i = 1; i < intervals; ++i)
    acc += (i % 2 == 1 ? 4.0 : 2.0) * psd.density(lo + h * static_cast<double>(i));
  if (points_used) *points_used = static_cast<int>(intervals + 1);
  return cross_gain * acc * h / 3.0;
}

InterferenceFactors interference_matrix(const Scenario& scenario, const ChannelSet& channels,
                                        const PsdProfile& psd) {
  const int n_sm = scenario.n_sm();
  const int k_pu = scenario.k_pu();
  if (channels.g_sp.rows() != n_sm || channels.g_sp.cols() != k_pu)
    throw std::invalid_argument("cross-gain table does not match the scenario dimensions");

  InterferenceFactors out;
  out.omega.setZero(n_sm, k_pu);
  int min_points = std::numeric_limits<int>::max();
  for (int n = 0; n < n_sm; ++n) {
    const int subband = scenario.sm_subbands[n];
    for (int l = 0; l < k_pu; ++l) {
      int points = 0;
      out.omega(n, l) = interference_factor(
          psd, channels.g_sp(n, l), spectral_distance(subband, l, scenario),
          scenario.pu_bands[l].length * scenario.delta_f_hz, &points);
      if (points > 0) min_points = std::min(min_points, points);
    }
  }
  out.quadrature_points = min_points == std::numeric_limits<int>::max() ? 0 : min_points;
  return out;
}

double total_interference(const Allocation& allocation, const InterferenceFactors& omega,
                          int pu) {
  if (pu < 0 || pu >= omega.k_pu()) throw std::out_of_range("unknown PU index");
  if (static_cast<int>(allocation.powers.size()) != omega.n_sm())
    throw std::invalid_argument("power vector length does not match the Omega table");
  double total = 0.0;
  for (int n = 0; n < omega.n_sm(); ++n) total += allocation.powers[n] * omega(n, pu);
  return total;
}

}  // namespace ufcr
