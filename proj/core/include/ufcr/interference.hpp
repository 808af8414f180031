#pragma once

#include <Eigen/Core>

#include "ufcr/scenario.hpp"
#include "ufcr/waveform.hpp"

namespace ufcr {

struct Allocation;

/// Omega table: watts received by PU l per watt sent on hole n, cross gain
/// included. Rows follow Scenario::sm_subbands, columns the PU order.
struct InterferenceFactors {
  Eigen::MatrixXd omega;
  int quadrature_points = 0;  // smallest point count used for any band

  double operator()(int n, int l) const { return omega(n, l); }
  int n_sm() const { return static_cast<int>(omega.rows()); }
  int k_pu() const { return static_cast<int>(omega.cols()); }
};

inline constexpr int kMinQuadraturePoints = 1025;

/// Centre-to-centre distance (Hz) between hole `subband` (absolute index)
/// and PU band `pu`. Throws std::out_of_range for a subband that is not a
/// hole or an unknown PU.
double spectral_distance(int subband, int pu, const Scenario& scenario);

/// cross_gain times the PSD mass inside [D - W/2, D + W/2], by composite
/// Simpson on the profile's density. Mass outside the profile support
/// counts as zero. `points_used` receives the Simpson point count.
double interference_factor(const PsdProfile& psd, double cross_gain, double distance_hz,
                           double pu_width_hz, int* points_used = nullptr);

/// Omega for every (hole, PU) pair.
InterferenceFactors interference_matrix(const Scenario& scenario, const ChannelSet& channels,
                                        const PsdProfile& psd);

/// Sum over holes of P_n * Omega[n][l].
double total_interference(const Allocation& allocation, const InterferenceFactors& omega, int pu);

}  // namespace ufcr
