#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ufcr/allocator.hpp"
#include "ufcr/interference.hpp"
#include "ufcr/power.hpp"
#include "ufcr/scenario.hpp"
#include "ufcr/waveform.hpp"

namespace ufcr {

struct SweepConfig {
  std::vector<WaveformSpec> waveforms;
  std::vector<double> i_th_dbw_grid;
  int trials = 200;
  std::uint64_t seed = 1;
  int k_sm = 4;
  int k_pu = 3;
  int n_total = 32;
  IntRange pu_total{16, 20};
  double p_max_watts = kDefaultPmaxWatts;
  double noise_variance = kDefaultNoiseVariance;
  double delta_f_hz = kDefaultSubbandWidthHz;
  double pu_snr_db = 20.0;
  int threads = 0;  // 0: hardware concurrency

  /// OFDM, FBMC, UF-OFDM at 40 and 60 dB over {-60, ..., 0} dBW.
  static SweepConfig defaults();
  void validate() const;
};

struct SweepRecord {
  int waveform_index = 0;
  std::string waveform;
  double alpha_db = 0.0;  // 0 for waveforms without a filter
  double i_th_dbw = 0.0;
  int trial = 0;
  double capacity_bps = 0.0;
  double power_used_w = 0.0;
  std::vector<double> interference_w;  // per PU
  double max_pu_interference_w = 0.0;
  double rate_gain_pct = 0.0;
  std::vector<double> pu_rate_loss_pct;  // per PU
  double max_pu_rate_loss_pct = 0.0;
  double power_loss_pct = 0.0;
  double unconstrained_capacity_bps = 0.0;  // budget-only water-filling, same channels
  double certificate_rel_gap = 0.0;         // |C_socp - C_wf| / C_wf
  SolveStatus status = SolveStatus::optimal;
  bool feasible = false;
};

inline constexpr double kPowerSlack = 1e-9;
inline constexpr double kInterferenceSlack = 1e-6;
inline constexpr double kCertificateTol = 1e-4;

/// Spectrum and channels of one sweep trial, shared by every waveform and
/// threshold. Budget, noise and subband width come from `config`.
struct TrialSetup {
  Scenario scenario;
  ChannelSet channels;
};

TrialSetup sweep_trial(const SweepConfig& config, int trial);

/// Paired Monte-Carlo sweep. Every (trial, threshold) sees the same
/// spectrum and channels for all waveforms. Records come back sorted by
/// waveform, threshold, trial. Solver failures are reported per record.
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

bool all_feasible(std::span<const SweepRecord> records);

/// 100 - 100 * used / p_max.
double power_loss_percent(double power_used_w, double p_max_w);

/// 100 * (capacity - reference) / reference. Throws on reference <= 0.
double rate_gain_percent(double capacity_bps, double reference_bps);

/// Rate loss of a PU that sees `interference_w` as extra white noise over
/// its `band_subbands` subbands, at nominal SNR `pu_snr_db`.
double pu_rate_loss_percent(double interference_w, int band_subbands, double noise_variance,
                            double pu_snr_db);

/// Per-PU rate loss for the bands of `scenario`.
std::vector<double> pu_rate_loss_percent(std::span<const double> interference_w,
                                         const Scenario& scenario, double pu_snr_db);

inline constexpr const char* kSweepCsvHeader =
    "waveform,alpha_db,i_th_dbw,trial,capacity_bps,power_used_w,max_pu_interference_w,"
    "rate_gain_pct,pu_rate_loss_pct,power_loss_pct";

void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records);

/// Support used for tabulating PSDs over an n_total-subband spectrum.
double psd_support_hz(int n_total, double delta_f_hz);

/// Greedy assignment followed by SOCP power allocation.
struct TwoPhaseResult {
  Allocation allocation;
  PowerProblem problem;
  PowerSolution power;
  double capacity_bps = 0.0;
};

TwoPhaseResult two_phase(const ChannelSet& channels, const Scenario& scenario, int k_sm,
                         const InterferenceFactors& omega);

/// Small random instance with exactly n_sm holes, for oracle comparisons.
struct Instance {
  Scenario scenario;
  ChannelSet channels;
  InterferenceFactors omega;
};

struct InstanceOptions {
  int n_sm = 6;
  int k_sm = 2;
  int k_pu = 2;
  double i_th_dbw = -40.0;
  WaveformSpec waveform = WaveformSpec::ufofdm(40.0);
};

Instance random_instance(std::uint64_t seed, const InstanceOptions& options);

struct OracleComparison {
  int trial = 0;
  int n_sm = 0;
  double oracle_bps = 0.0;
  double two_phase_bps = 0.0;
  double gap_percent = 0.0;  // 100 * (oracle - two_phase) / oracle
};

/// Oracle vs two-phase over `trials` instances; n_sm is drawn uniformly
/// from [n_sm_range.lo, n_sm_range.hi] per trial.
std::vector<OracleComparison> compare_with_oracle(std::uint64_t seed, int trials,
                                                  IntRange n_sm_range,
                                                  const InstanceOptions& options);

}  // namespace ufcr
