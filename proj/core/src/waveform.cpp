#include "ufcr/waveform.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ufcr {

namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// PHYDYAS prototype frequency samples H_0..H_{K-1}.
std::vector<double> phydyas_weights(int overlap) {
  switch (overlap) {
    case 2:
      return {1.0, std::numbers::sqrt2 / 2.0};
    case 3:
      return {1.0, 0.911438, 0.411438};
    case 4:
      return {1.0, 0.971960, std::numbers::sqrt2 / 2.0, 0.235147};
    default:
      throw std::invalid_argument("FBMC overlap factor must be 2, 3 or 4");
  }
}

}  // namespace

std::string_view to_string(WaveformKind kind) {
  switch (kind) {
    case WaveformKind::ofdm:
      return "ofdm";
    case WaveformKind::fbmc:
      return "fbmc";
    case WaveformKind::ufofdm:
      return "ufofdm";
  }
  return "unknown";
}

WaveformKind parse_waveform_kind(std::string_view name) {
  if (name == "ofdm") return WaveformKind::ofdm;
  if (name == "fbmc") return WaveformKind::fbmc;
  if (name == "ufofdm" || name == "uf-ofdm") return WaveformKind::ufofdm;
  throw std::invalid_argument("unknown waveform '" + std::string(name) + "'");
}

WaveformSpec WaveformSpec::ofdm(double subband_width_hz, double cp_fraction) {
  WaveformSpec s;
  s.kind = WaveformKind::ofdm;
  s.subband_width_hz = subband_width_hz;
  s.cp_fraction = cp_fraction;
  return s;
}

WaveformSpec WaveformSpec::fbmc(double subband_width_hz, int overlap) {
  WaveformSpec s;
  s.kind = WaveformKind::fbmc;
  s.subband_width_hz = subband_width_hz;
  s.overlap = overlap;
  return s;
}

WaveformSpec WaveformSpec::ufofdm(double alpha_db, int filter_len, double subband_width_hz) {
  WaveformSpec s;
  s.kind = WaveformKind::ufofdm;
  s.alpha_db = alpha_db;
  s.filter_len = filter_len;
  s.subband_width_hz = subband_width_hz;
  return s;
}

void WaveformSpec::validate() const {
  if (!(subband_width_hz > 0.0) || !std::isfinite(subband_width_hz))
    throw std::invalid_argument("subband width must be positive");
  switch (kind) {
    case WaveformKind::ofdm:
      if (!(cp_fraction >= 0.0)) throw std::invalid_argument("cp_fraction must be >= 0");
      break;
    case WaveformKind::fbmc:
      phydyas_weights(overlap);
      break;
    case WaveformKind::ufofdm:
      if (filter_len < 1 || filter_len % 2 == 0)
        throw std::invalid_argument(
            "UF-OFDM filter length must be odd (2M+1); nearest realisable to an even N is N-1");
      if (!(alpha_db > 0.0)) throw std::invalid_argument("UF-OFDM alpha must be > 0 dB");
      if (!(mainlobe_edge_subbands > 0.0))
        throw std::invalid_argument("UF-OFDM main-lobe edge must be > 0");
      break;
  }
}

double chebyshev_poly(int n, double kappa) {
  if (n < 0) throw std::invalid_argument("Chebyshev order must be non-negative");
  if (std::abs(kappa) <= 1.0) return std::cos(n * std::acos(kappa));
  // For kappa < -1 use C_n(-x) = (-1)^n C_n(x).
  const double magnitude = std::cosh(n * std::acosh(std::abs(kappa)));
  return (kappa < 0.0 && n % 2 == 1) ? -magnitude : magnitude;
}

double dolph_chebyshev_kappa0(int filter_len, double alpha_db) {
  if (filter_len < 1 || filter_len % 2 == 0)
    throw std::invalid_argument("Dolph-Chebyshev length must be odd");
  const int m = (filter_len - 1) / 2;
  if (m == 0) return 1.0;
  return std::cosh(std::acosh(std::pow(10.0, alpha_db / 20.0)) / (2.0 * m));
}

std::vector<double> dolph_chebyshev_coeffs(int filter_len, double alpha_db) {
  if (filter_len < 1 || filter_len % 2 == 0)
    throw std::invalid_argument("Dolph-Chebyshev length must be odd (N = 2M+1)");
  if (!(alpha_db > 0.0)) throw std::invalid_argument("sidelobe attenuation must be > 0 dB");

  const int n_taps = filter_len;
  const int m_half = (n_taps - 1) / 2;
  if (m_half == 0) return {1.0};

  const double ripple = std::pow(10.0, -alpha_db / 20.0);
  const double kappa0 = dolph_chebyshev_kappa0(filter_len, alpha_db);
  const double inv_n = 1.0 / n_taps;

  std::vector<double> spectrum(static_cast<std::size_t>(m_half) + 1);
  for (int m = 1; m <= m_half; ++m)
    spectrum[m] = chebyshev_poly(2 * m_half, kappa0 * std::cos(std::numbers::pi * m * inv_n));

  std::vector<double> taps(static_cast<std::size_t>(n_taps));
  for (int n = 0; n <= m_half; ++n) {
    double acc = 0.0;
    for (int m = 1; m <= m_half; ++m)
      acc += spectrum[m] * std::cos(2.0 * std::numbers::pi * m * n * inv_n);
    const double value = inv_n + ripple * inv_n * 2.0 * acc;
    taps[m_half + n] = value;
    taps[m_half - n] = value;
  }
  return taps;
}

double symmetric_filter_response(std::span<const double> taps, double nu) {
  if (taps.empty() || taps.size() % 2 == 0)
    throw std::invalid_argument("symmetric filter needs an odd, non-empty tap vector");
  const std::size_t m_half = (taps.size() - 1) / 2;
  // Clenshaw on sum a_k T_k(x), x = cos(2 pi nu), a_0 = h_0, a_k = 2 h_k.
  const double x = std::cos(2.0 * std::numbers::pi * nu);
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t k = m_half; k >= 1; --k) {
    const double b0 = 2.0 * taps[m_half + k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return taps[m_half] + x * b1 - b2;
}

PsdProfile::PsdProfile(WaveformSpec spec, double grid_step_hz, double support_hz)
    : spec_(spec), grid_step_hz_(grid_step_hz), support_hz_(support_hz) {
  spec_.validate();
  if (!(grid_step_hz > 0.0) || !std::isfinite(grid_step_hz))
    throw std::invalid_argument("PSD grid step must be positive");
  if (support_hz < 16.0 * spec_.subband_width_hz * (1.0 - 1e-12))
    throw std::invalid_argument("PSD support must cover at least 16 subband widths per side");

  if (spec_.kind == WaveformKind::fbmc) fbmc_weights_ = phydyas_weights(spec_.overlap);
  if (spec_.kind == WaveformKind::ufofdm) {
    taps_ = dolph_chebyshev_coeffs(spec_.filter_len, spec_.alpha_db);
    if (taps_.size() > 1) {
      const double kappa0 = dolph_chebyshev_kappa0(spec_.filter_len, spec_.alpha_db);
      const double edge_nu = std::acos(1.0 / kappa0) / std::numbers::pi;
      filter_rate_hz_ = spec_.mainlobe_edge_subbands * spec_.subband_width_hz / edge_nu;
    }
  }

  const auto n_half = static_cast<long>(std::llround(support_hz / grid_step_hz));
  support_hz_ = static_cast<double>(n_half) * grid_step_hz;
  offsets_.reserve(static_cast<std::size_t>(2 * n_half + 1));
  samples_.reserve(offsets_.capacity());
  for (long i = -n_half; i <= n_half; ++i) {
    const double f = static_cast<double>(i) * grid_step_hz;
    offsets_.push_back(f);
    samples_.push_back(raw_density(f));
  }

  double area = 0.0;
  for (std::size_t i = 1; i < samples_.size(); ++i) area += 0.5 * (samples_[i - 1] + samples_[i]);
  area *= grid_step_hz;
  if (!(area > 0.0)) throw std::runtime_error("PSD model integrates to zero");
  normalisation_ = 1.0 / area;
  for (double& s : samples_) s *= normalisation_;
}

double PsdProfile::raw_density(double offset_hz) const {
  const double f = std::abs(offset_hz);
  const double df = spec_.subband_width_hz;
  switch (spec_.kind) {
    case WaveformKind::ofdm: {
      const double ts = (1.0 + spec_.cp_fraction) / df;
      const double s = sinc(f * ts);
      return ts * s * s;
    }
    case WaveformKind::fbmc: {
      const auto& weights = fbmc_weights_;
      const int k_max = spec_.overlap - 1;
      const double x = f * spec_.overlap / df;
      double g = 0.0;
      for (int k = -k_max; k <= k_max; ++k) g += weights[std::abs(k)] * sinc(x - k);
      return g * g / df;
    }
    case WaveformKind::ufofdm: {
      const double ts = 1.0 / df;
      double amplitude = sinc(f * ts);
      if (taps_.size() > 1) amplitude *= symmetric_filter_response(taps_, f / filter_rate_hz_);
      return ts * amplitude * amplitude;
    }
  }
  return 0.0;
}

double PsdProfile::density(double offset_hz) const {
  const double f = std::abs(offset_hz);
  if (f > support_hz_ * (1.0 + 1e-12)) return 0.0;
  return raw_density(f) * normalisation_;
}

PsdProfile psd_profile(const WaveformSpec& spec, double grid_step_hz, double support_hz) {
  return PsdProfile(spec, grid_step_hz, support_hz);
}

PsdProfile psd_profile(const WaveformSpec& spec) {
  return PsdProfile(spec, spec.subband_width_hz / kDefaultGridDivisions,
                    spec.subband_width_hz * kDefaultSupportSubbands);
}

}  // namespace ufcr
