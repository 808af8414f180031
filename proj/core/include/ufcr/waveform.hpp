#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ufcr {

enum class WaveformKind { ofdm, fbmc, ufofdm };

std::string_view to_string(WaveformKind kind);
WaveformKind parse_waveform_kind(std::string_view name);

/// Multicarrier scheme plus the parameters of its per-subband filter.
///
/// Only the fields relevant to `kind` are read: `alpha_db`, `filter_len`
/// and `mainlobe_edge_subbands` for UF-OFDM, `cp_fraction` for OFDM and
/// `overlap` for FBMC.
struct WaveformSpec {
  WaveformKind kind = WaveformKind::ofdm;
  double alpha_db = 40.0;
  int filter_len = 73;
  double cp_fraction = 0.0;
  int overlap = 4;
  double subband_width_hz = 312.5e3;
  // The Dolph-Chebyshev response is mapped onto the frequency axis so that
  // its main lobe meets the -alpha dB sidelobe level at this many subband
  // widths from the centre.
  double mainlobe_edge_subbands = 3.0;

  static WaveformSpec ofdm(double subband_width_hz = 312.5e3, double cp_fraction = 0.0);
  static WaveformSpec fbmc(double subband_width_hz = 312.5e3, int overlap = 4);
  static WaveformSpec ufofdm(double alpha_db, int filter_len = 73,
                             double subband_width_hz = 312.5e3);

  /// Throws std::invalid_argument when an invariant of the kind is broken.
  void validate() const;
  /// Short label used in CSV output, e.g. "ufofdm".
  std::string_view id() const { return to_string(kind); }
};

/// n-th order Chebyshev polynomial C_n(kappa), valid for any real kappa.
double chebyshev_poly(int n, double kappa);

/// Dolph-Chebyshev filter taps for length N = 2M+1 and sidelobe attenuation
/// alpha (dB). Element i holds the tap at time index n = i - M.
std::vector<double> dolph_chebyshev_coeffs(int filter_len, double alpha_db);

/// kappa_0 of the Dolph-Chebyshev design; 1 for the degenerate length-1 filter.
double dolph_chebyshev_kappa0(int filter_len, double alpha_db);

/// Real frequency response of an even-symmetric tap vector at normalised
/// frequency nu (cycles per sample).
double symmetric_filter_response(std::span<const double> taps, double nu);

/// Normalised power spectral density of a single subband.
///
/// Holds both the tabulated samples on a uniform grid and the closed-form
/// model they were drawn from, so quadrature can refine past the grid.
/// The density is scaled so the trapezoidal integral of the samples over
/// [-support, support] is one, and is zero outside the support.
class PsdProfile {
 public:
  PsdProfile(WaveformSpec spec, double grid_step_hz, double support_hz);

  /// Density in 1/Hz at an offset from the subband centre.
  double density(double offset_hz) const;

  const WaveformSpec& spec() const { return spec_; }
  double grid_step_hz() const { return grid_step_hz_; }
  double support_hz() const { return support_hz_; }
  std::span<const double> offsets_hz() const { return offsets_; }
  std::span<const double> samples() const { return samples_; }

 private:
  double raw_density(double offset_hz) const;

  WaveformSpec spec_;
  double grid_step_hz_;
  double support_hz_;
  std::vector<double> taps_;
  std::vector<double> fbmc_weights_;
  double filter_rate_hz_ = 0.0;
  double normalisation_ = 1.0;
  std::vector<double> offsets_;
  std::vector<double> samples_;
};

inline constexpr double kDefaultGridDivisions = 256.0;
inline constexpr double kDefaultSupportSubbands = 32.0;

/// Tabulates the normalised single-subband PSD of `spec`.
/// Requires grid_step_hz > 0 and support_hz >= 16 subband widths.
PsdProfile psd_profile(const WaveformSpec& spec, double grid_step_hz, double support_hz);

/// Default tabulation: step = width/256, support = +-32 widths.
PsdProfile psd_profile(const WaveformSpec& spec);

}  // namespace ufcr
