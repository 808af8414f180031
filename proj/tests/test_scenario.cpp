#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "ufcr/scenario.hpp"

using namespace ufcr;

TEST(Units, DbwRoundTrip) {
  EXPECT_DOUBLE_EQ(dbw_to_watts(0.0), 1.0);
  EXPECT_NEAR(dbw_to_watts(-30.0), 1e-3, 1e-18);
  EXPECT_NEAR(watts_to_dbw(1e-5), -50.0, 1e-12);
}

TEST(Scenario, FromLayoutDerivesHoles) {
  const auto s = Scenario::from_layout(10, {{2, 3}, {7, 1}});
  EXPECT_EQ(s.sm_subbands, (std::vector<int>{0, 1, 5, 6, 8, 9}));
  EXPECT_EQ(s.n_sm(), 6);
  EXPECT_EQ(s.k_pu(), 2);
  EXPECT_EQ(s.hole_position(5), 2);
  EXPECT_EQ(s.hole_position(3), -1);
  EXPECT_NO_THROW(s.validate());
}

TEST(Scenario, ValidateCatchesBrokenLayouts) {
  EXPECT_THROW(Scenario::from_layout(10, {{2, 3}, {4, 2}}), std::invalid_argument);
  EXPECT_THROW(Scenario::from_layout(10, {{8, 3}}), std::invalid_argument);
  auto s = Scenario::from_layout(10, {{2, 3}});
  s.sm_subbands.pop_back();
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = Scenario::from_layout(10, {{2, 3}});
  s.i_th_watts = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = Scenario::from_layout(10, {{2, 3}});
  s.noise_variance = -1.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(GenerateSpectrum, DefaultsGiveTwelveToSixteenHoles) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto s = generate_spectrum(seed, 32, 3, {16, 20});
    EXPECT_GE(s.n_sm(), 12);
    EXPECT_LE(s.n_sm(), 16);
    EXPECT_EQ(s.k_pu(), 3);
    EXPECT_NO_THROW(s.validate());
  }
}

TEST(GenerateSpectrum, ExactPartition) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto s = generate_spectrum(seed, 32, 3, {16, 20});
    std::vector<int> owner(32, 0);
    for (const auto& b : s.pu_bands) {
      EXPECT_GE(b.length, 1);
      for (int i = b.start; i < b.start + b.length; ++i) ++owner[i];
    }
    for (int n : s.sm_subbands) ++owner[n];
    for (int i = 0; i < 32; ++i) EXPECT_EQ(owner[i], 1) << "subband " << i;
  }
}

TEST(GenerateSpectrum, HoleBetweenBandsWhenRoomAllows) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto s = generate_spectrum(seed, 32, 3, {16, 20});
    for (int l = 0; l + 1 < s.k_pu(); ++l)
      EXPECT_GT(s.pu_bands[l + 1].start, s.pu_bands[l].start + s.pu_bands[l].length);
  }
}

TEST(GenerateSpectrum, SingleHole) {
  const auto s = generate_spectrum(3, 16, 1, {15, 15});
  EXPECT_EQ(s.n_sm(), 1);
}

TEST(GenerateSpectrum, AdjacentBandsOnlyWhenForced) {
  // 2 holes, 4 PUs: three interior gaps cannot all be filled
  const auto s = generate_spectrum(11, 10, 4, {8, 8});
  EXPECT_EQ(s.n_sm(), 2);
  EXPECT_NO_THROW(s.validate());
}

TEST(GenerateSpectrum, Deterministic) {
  EXPECT_EQ(generate_spectrum(42, 32, 3, {16, 20}), generate_spectrum(42, 32, 3, {16, 20}));
  int differ = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    differ += !(generate_spectrum(seed, 32, 3, {16, 20}) == generate_spectrum(seed + 1000, 32, 3, {16, 20}));
  EXPECT_GT(differ, 15);
}

TEST(GenerateSpectrum, RejectsInfeasibleRanges) {
  EXPECT_THROW(generate_spectrum(1, 32, 3, {16, 32}), std::invalid_argument);
  EXPECT_THROW(generate_spectrum(1, 32, 3, {2, 5}), std::invalid_argument);
  EXPECT_THROW(generate_spectrum(1, 32, 0, {16, 20}), std::invalid_argument);
  EXPECT_THROW(generate_spectrum(1, 32, 3, {20, 16}), std::invalid_argument);
}

TEST(GenerateSpectrum, PuTotalCoversRange) {
  std::set<int> totals;
  for (std::uint64_t seed = 0; seed < 300; ++seed) totals.insert(32 - generate_spectrum(seed, 32, 3, {16, 20}).n_sm());
  EXPECT_EQ(totals, (std::set<int>{16, 17, 18, 19, 20}));
}

TEST(GenerateChannels, ShapesAndDeterminism) {
  const auto s = generate_spectrum(5, 32, 3, {16, 20});
  const auto a = generate_channels(9, s, 4);
  const auto b = generate_channels(9, s, 4);
  EXPECT_EQ(a.k_sm(), 4);
  EXPECT_EQ(a.n_sm(), s.n_sm());
  EXPECT_EQ(a.k_pu(), 3);
  EXPECT_EQ(a.g_ss, b.g_ss);
  EXPECT_EQ(a.g_sp, b.g_sp);
  EXPECT_TRUE((a.g_ss.array() >= 0.0).all());
  EXPECT_TRUE((a.g_sp.array() >= 0.0).all());
  // cross gains do not depend on the number of SMs
  EXPECT_EQ(generate_channels(9, s, 2).g_sp, a.g_sp);
}

TEST(GenerateChannels, UnitMeanExponential) {
  const auto s = Scenario::from_layout(1001, {{1000, 1}});  // 1000 holes
  const auto ch = generate_channels(2024, s, 100);  // 1e5 SM gains
  const double mean = ch.g_ss.mean();
  EXPECT_NEAR(mean, 1.0, 0.02);
  const double below = (ch.g_ss.array() <= 1.0).cast<double>().mean();
  EXPECT_NEAR(below, 1.0 - std::exp(-1.0), 0.01);
}

TEST(MixSeed, SeparatesStreams) {
  EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
  EXPECT_NE(mix_seed(1, 0), mix_seed(2, 0));
  EXPECT_EQ(mix_seed(7, 3), mix_seed(7, 3));
}
