#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace ufcr {

/// Contiguous run of subbands occupied by one primary user.
struct PuBand {
  int start = 0;
  int length = 1;

  double center_index() const { return start + 0.5 * length; }
  bool contains(int subband) const { return subband >= start && subband < start + length; }
  friend bool operator==(const PuBand&, const PuBand&) = default;
};

struct IntRange {
  int lo = 0;
  int hi = 0;
};

inline constexpr double kDefaultSubbandWidthHz = 312.5e3;
inline constexpr double kDefaultPmaxWatts = 1.0;
inline constexpr double kDefaultNoiseVariance = 1e-6;
inline constexpr double kDefaultIthDbw = -30.0;

double dbw_to_watts(double dbw);
double watts_to_dbw(double watts);

/// Spectrum layout: PU bands, the spectrum holes left to the secondary
/// system, and the power/interference limits that apply to it.
struct Scenario {
  int n_total = 0;
  double delta_f_hz = kDefaultSubbandWidthHz;
  std::vector<PuBand> pu_bands;
  std::vector<int> sm_subbands;  // ascending hole indices
  double i_th_watts = dbw_to_watts(kDefaultIthDbw);
  double p_max_watts = kDefaultPmaxWatts;
  double noise_variance = kDefaultNoiseVariance;
  // Interference received by the SMs from primary transmissions, J_n.
  double pu_to_sm_interference_watts = 0.0;

  /// Builds a scenario from a band layout, deriving the hole set.
  static Scenario from_layout(int n_total, std::vector<PuBand> bands);

  int n_sm() const { return static_cast<int>(sm_subbands.size()); }
  int k_pu() const { return static_cast<int>(pu_bands.size()); }
  /// Position of an absolute subband index within sm_subbands, or -1.
  int hole_position(int subband) const;

  /// Throws std::invalid_argument on overlapping/out-of-range bands, a hole
  /// set that is not the exact complement, or non-positive limits.
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Squared channel magnitudes. g_ss is K_SM x N_SM (SM, hole position);
/// g_sp is N_SM x K_PU (hole position, PU).
struct ChannelSet {
  Eigen::MatrixXd g_ss;
  Eigen::MatrixXd g_sp;

  int k_sm() const { return static_cast<int>(g_ss.rows()); }
  int n_sm() const { return static_cast<int>(g_ss.cols()); }
  int k_pu() const { return static_cast<int>(g_sp.cols()); }
};

/// splitmix64 finaliser, used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Random PU layout: total PU width uniform on `pu_total`, split into
/// k_pu bands (each >= 1) and interleaved with the holes. Deterministic in
/// the seed. Throws std::invalid_argument when the packing is infeasible.
Scenario generate_spectrum(std::uint64_t seed, int n_total, int k_pu, IntRange pu_total);

/// i.i.d. unit-mean exponential power gains (Rayleigh fading) for every
/// (SM, hole) and (hole, PU) pair.
ChannelSet generate_channels(std::uint64_t seed, const Scenario& scenario, int k_sm);

}  // namespace ufcr
