#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "ufcr/waveform.hpp"

using namespace ufcr;

namespace {

double dtft(const std::vector<double>& taps, double nu) {
  const int m = static_cast<int>(taps.size() / 2);
  double acc = 0.0;
  for (int i = 0; i < static_cast<int>(taps.size()); ++i)
    acc += taps[i] * std::cos(2.0 * std::numbers::pi * nu * (i - m));
  return acc;
}

// Peak sidelobe (dB relative to the DC response) of a dense DTFT grid.
double peak_sidelobe_db(const std::vector<double>& taps, int grid = 1 << 16) {
  std::vector<double> mag(grid / 2 + 1);
  for (int k = 0; k <= grid / 2; ++k) mag[k] = std::abs(dtft(taps, static_cast<double>(k) / grid));
  int k = 1;
  while (k < grid / 2 && mag[k] <= mag[k - 1]) ++k;  // first null ends the main lobe
  double peak = 0.0;
  for (; k <= grid / 2; ++k) peak = std::max(peak, mag[k]);
  return 20.0 * std::log10(peak / mag[0]);
}

double trapezoid(const PsdProfile& p) {
  const auto f = p.offsets_hz();
  const auto d = p.samples();
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) area += 0.5 * (d[i] + d[i + 1]) * (f[i + 1] - f[i]);
  return area;
}

double tail_mass(const PsdProfile& p, double beyond_hz) {
  const auto f = p.offsets_hz();
  const auto d = p.samples();
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i)
    if (std::abs(f[i]) >= beyond_hz && std::abs(f[i + 1]) >= beyond_hz)
      area += 0.5 * (d[i] + d[i + 1]) * (f[i + 1] - f[i]);
  return area;
}

std::vector<WaveformSpec> all_specs() {
  return {WaveformSpec::ofdm(),        WaveformSpec::ofdm(312.5e3, 0.07),
          WaveformSpec::fbmc(),        WaveformSpec::fbmc(312.5e3, 2),
          WaveformSpec::ufofdm(40.0),  WaveformSpec::ufofdm(60.0),
          WaveformSpec::ufofdm(40.0, 37), WaveformSpec::ufofdm(80.0, 5)};
}

}  // namespace

TEST(Chebyshev, KnownValues) {
  EXPECT_NEAR(chebyshev_poly(2, 1.0), 1.0, 1e-12);
  EXPECT_NEAR(chebyshev_poly(3, 0.5), -1.0, 1e-12);
  EXPECT_NEAR(chebyshev_poly(2, 2.0), 7.0, 1e-12);
  EXPECT_NEAR(chebyshev_poly(0, -3.0), 1.0, 1e-12);
  EXPECT_NEAR(chebyshev_poly(1, -3.0), -3.0, 1e-12);
}

TEST(Chebyshev, RecurrenceOnWideInterval) {
  for (int n = 1; n < 30; ++n)
    for (double k = -2.0; k <= 2.0; k += 0.01) {
      const double lhs = chebyshev_poly(n + 1, k);
      const double rhs = 2.0 * k * chebyshev_poly(n, k) - chebyshev_poly(n - 1, k);
      EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, std::abs(rhs))) << "n=" << n << " k=" << k;
    }
}

TEST(Chebyshev, NegativeOrderThrows) { EXPECT_THROW(chebyshev_poly(-1, 0.3), std::invalid_argument); }

TEST(DolphChebyshev, SingleTapIsIdentity) {
  const auto taps = dolph_chebyshev_coeffs(1, 40.0);
  ASSERT_EQ(taps.size(), 1u);
  EXPECT_DOUBLE_EQ(taps[0], 1.0);
}

TEST(DolphChebyshev, EvenSymmetric) {
  for (int len : {5, 37, 73}) {
    const auto taps = dolph_chebyshev_coeffs(len, 40.0);
    ASSERT_EQ(static_cast<int>(taps.size()), len);
    const int m = len / 2;
    for (int n = 1; n <= m; ++n) EXPECT_NEAR(taps[m - n], taps[m + n], 1e-14);
  }
}

TEST(DolphChebyshev, RejectsBadInput) {
  EXPECT_THROW(dolph_chebyshev_coeffs(74, 40.0), std::invalid_argument);
  EXPECT_THROW(dolph_chebyshev_coeffs(0, 40.0), std::invalid_argument);
  EXPECT_THROW(dolph_chebyshev_coeffs(73, 0.0), std::invalid_argument);
}

TEST(DolphChebyshev, EquirippleSidelobes) {
  for (double alpha : {40.0, 60.0})
    for (int len : {37, 73})
      EXPECT_NEAR(peak_sidelobe_db(dolph_chebyshev_coeffs(len, alpha)), -alpha, 0.5)
          << "alpha=" << alpha << " len=" << len;
}

TEST(DolphChebyshev, ResponseMatchesChebyshevForm) {
  const int len = 73;
  const double alpha = 40.0;
  const auto taps = dolph_chebyshev_coeffs(len, alpha);
  const double k0 = dolph_chebyshev_kappa0(len, alpha);
  const double r = std::pow(10.0, -alpha / 20.0);
  for (double nu = 0.0; nu <= 0.5; nu += 1.0 / 997.0) {
    const double direct = dtft(taps, nu);
    EXPECT_NEAR(symmetric_filter_response(taps, nu), direct, 1e-12);
    EXPECT_NEAR(direct, r * chebyshev_poly(len - 1, k0 * std::cos(std::numbers::pi * nu)), 1e-10);
  }
}

TEST(Waveform, ParseAndValidate) {
  EXPECT_EQ(parse_waveform_kind("ofdm"), WaveformKind::ofdm);
  EXPECT_EQ(parse_waveform_kind("fbmc"), WaveformKind::fbmc);
  EXPECT_EQ(parse_waveform_kind("ufofdm"), WaveformKind::ufofdm);
  EXPECT_EQ(parse_waveform_kind("uf-ofdm"), WaveformKind::ufofdm);
  EXPECT_THROW(parse_waveform_kind("gfdm"), std::invalid_argument);
  EXPECT_THROW(WaveformSpec::ufofdm(40.0, 74).validate(), std::invalid_argument);
  EXPECT_THROW(WaveformSpec::fbmc(312.5e3, 5).validate(), std::invalid_argument);
  EXPECT_THROW(WaveformSpec::ofdm(312.5e3, -0.1).validate(), std::invalid_argument);
  EXPECT_EQ(WaveformSpec::fbmc().id(), "fbmc");
}

TEST(PsdProfile, RejectsBadTabulation) {
  EXPECT_THROW(psd_profile(WaveformSpec::ofdm(), 0.0, 32 * 312.5e3), std::invalid_argument);
  EXPECT_THROW(psd_profile(WaveformSpec::ofdm(), 1e3, 8 * 312.5e3), std::invalid_argument);
}

TEST(PsdProfile, UnitIntegralForEverySpec) {
  for (const auto& spec : all_specs()) EXPECT_NEAR(trapezoid(psd_profile(spec)), 1.0, 1e-6) << spec.id();
}

TEST(PsdProfile, EvenSymmetry) {
  for (const auto& spec : all_specs()) {
    const auto p = psd_profile(spec);
    const auto d = p.samples();
    const std::size_t n = d.size();
    ASSERT_EQ(n % 2, 1u);
    for (std::size_t i = 0; i < n / 2; ++i)
      EXPECT_NEAR(d[i], d[n - 1 - i], 1e-12 * d[n / 2]) << spec.id() << " i=" << i;
    for (double f : {1e3, 2.5e5, 1.7e6, 9.1e6}) EXPECT_NEAR(p.density(f), p.density(-f), 1e-18);
  }
}

TEST(PsdProfile, OfdmPeaksAtCentre) {
  const auto p = psd_profile(WaveformSpec::ofdm());
  const auto d = p.samples();
  const auto peak = std::max_element(d.begin(), d.end()) - d.begin();
  EXPECT_DOUBLE_EQ(p.offsets_hz()[peak], 0.0);
  EXPECT_DOUBLE_EQ(p.density(0.0), d[peak]);
}

TEST(PsdProfile, SamplesAgreeWithDensity) {
  const auto p = psd_profile(WaveformSpec::ufofdm(40.0));
  for (std::size_t i = 0; i < p.samples().size(); i += 97)
    EXPECT_DOUBLE_EQ(p.samples()[i], p.density(p.offsets_hz()[i]));
  EXPECT_EQ(p.density(p.support_hz() * 1.01), 0.0);
}

TEST(PsdProfile, HigherAlphaLowerFarLeakage) {
  const double df = 312.5e3;
  const auto a40 = psd_profile(WaveformSpec::ufofdm(40.0));
  const auto a60 = psd_profile(WaveformSpec::ufofdm(60.0));
  EXPECT_LT(a60.density(10.0 * df), a40.density(10.0 * df));
}

TEST(PsdProfile, FilteredTailBelowOfdm) {
  const double df = 312.5e3;
  const double ofdm = tail_mass(psd_profile(WaveformSpec::ofdm()), df);
  for (double alpha : {40.0, 60.0, 80.0})
    EXPECT_LT(tail_mass(psd_profile(WaveformSpec::ufofdm(alpha)), df), ofdm) << alpha;
}

TEST(PsdProfile, CyclicPrefixNarrowsOfdmSpectrum) {
  // longer symbol, narrower spectrum
  const auto plain = psd_profile(WaveformSpec::ofdm());
  const auto cp = psd_profile(WaveformSpec::ofdm(312.5e3, 0.25));
  EXPECT_GT(cp.density(0.0), plain.density(0.0));
}

TEST(PsdProfile, SingleTapFilterMatchesOfdmShapeNearCentre) {
  // a one-tap filter has a flat response, so only the subband sinc remains
  const auto ofdm = psd_profile(WaveformSpec::ofdm());
  const auto uf1 = psd_profile(WaveformSpec::ufofdm(40.0, 1));
  for (double f : {0.0, 0.3e5, 1.2e5, 4.4e5, 2.0e6}) EXPECT_NEAR(uf1.density(f), ofdm.density(f), 1e-9 * ofdm.density(0.0));
}
