#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "ufcr/allocator.hpp"

using namespace ufcr;

namespace {

ChannelSet from_rows(std::initializer_list<std::initializer_list<double>> rows, int k_pu = 1) {
  ChannelSet ch;
  const int k = static_cast<int>(rows.size());
  const int n = static_cast<int>(rows.begin()->size());
  ch.g_ss.resize(k, n);
  int r = 0;
  for (const auto& row : rows) {
    int c = 0;
    for (double v : row) ch.g_ss(r, c++) = v;
    ++r;
  }
  ch.g_sp = Eigen::MatrixXd::Ones(n, k_pu);
  return ch;
}

Scenario holes_only(int n_sm) {
  // one PU band at the top edge, n_sm holes below it
  return Scenario::from_layout(n_sm + 1, {{n_sm, 1}});
}

}  // namespace

TEST(Allocate, SingleSmTakesEverything) {
  const auto s = generate_spectrum(2, 32, 3, {16, 20});
  const auto ch = generate_channels(3, s, 1);
  const auto a = allocate_subbands(ch, s, 1);
  for (int k : a.assign) EXPECT_EQ(k, 0);
}

TEST(Allocate, HandTraceTwoByTwo) {
  const auto ch = from_rows({{3, 1}, {2, 4}});
  const auto a = allocate_subbands(ch, holes_only(2), 2);
  EXPECT_EQ(a.assign, (std::vector<int>{0, 1}));
}

TEST(Allocate, EqualRowsAlternate) {
  const auto ch = from_rows({{4, 3, 2, 1}, {4, 3, 2, 1}});
  std::vector<AllocationStep> trace;
  const auto a = allocate_subbands(ch, holes_only(4), 2, &trace);
  // SM0 <- f0, SM1 <- f1, SM1 (lower rate) <- f2, SM0 <- f3
  EXPECT_EQ(a.assign, (std::vector<int>{0, 1, 1, 0}));
  const auto c0 = std::count(a.assign.begin(), a.assign.end(), 0);
  EXPECT_LE(std::abs(2 * c0 - 4), 1);
  ASSERT_EQ(trace.size(), 4u);
  EXPECT_EQ(trace[2].phase, AllocationStep::Phase::fairness);
  EXPECT_EQ(trace[2].sm, 1);
  EXPECT_NEAR(trace[2].rates_before[0], std::log2(1.0 + 0.25 * 4), 1e-12);
  EXPECT_NEAR(trace[2].rates_before[1], std::log2(1.0 + 0.25 * 3), 1e-12);
}

TEST(Allocate, TiesGoToLowestIndex) {
  const auto ch = from_rows({{1, 1, 1}, {1, 1, 1}});
  const auto a = allocate_subbands(ch, holes_only(3), 2);
  // SM0 <- f0, SM1 <- f1, equal rates so SM0 <- f2
  EXPECT_EQ(a.assign, (std::vector<int>{0, 1, 0}));
}

TEST(Allocate, RejectsMoreSmsThanHoles) {
  const auto ch = from_rows({{1, 2}, {3, 4}, {5, 6}});
  EXPECT_THROW(allocate_subbands(ch, holes_only(2), 3), std::invalid_argument);
}

TEST(Allocate, ReplayInvariantsOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = generate_spectrum(seed, 32, 3, {16, 20});
    const int k_sm = 1 + static_cast<int>(seed % 6);
    const auto ch = generate_channels(seed + 77, s, k_sm);
    std::vector<AllocationStep> trace;
    const auto a = allocate_subbands(ch, s, k_sm, &trace);
    ASSERT_EQ(static_cast<int>(trace.size()), s.n_sm());

    for (int n = 0; n < s.n_sm(); ++n) {
      EXPECT_GE(a.assign[n], 0);
      EXPECT_LT(a.assign[n], k_sm);
    }
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const auto& st = trace[i];
      // the chosen hole is the recipient's best among those still free
      for (int n : st.available_before) EXPECT_LE(ch.g_ss(st.sm, n), ch.g_ss(st.sm, st.hole));
      EXPECT_NE(std::find(st.available_before.begin(), st.available_before.end(), st.hole),
                st.available_before.end());
      if (static_cast<int>(i) < k_sm) {
        EXPECT_EQ(st.phase, AllocationStep::Phase::first_pass);
        EXPECT_EQ(st.sm, static_cast<int>(i));
      } else {
        EXPECT_EQ(st.phase, AllocationStep::Phase::fairness);
        const double lowest = *std::min_element(st.rates_before.begin(), st.rates_before.end());
        EXPECT_EQ(st.rates_before[st.sm], lowest);
      }
    }
  }
}

TEST(Allocate, Deterministic) {
  const auto s = generate_spectrum(8, 32, 3, {16, 20});
  const auto ch = generate_channels(9, s, 4);
  EXPECT_EQ(allocate_subbands(ch, s, 4).assign, allocate_subbands(ch, s, 4).assign);
}

TEST(AggregateGains, NoiseNormalised) {
  const auto ch = from_rows({{5.0}});
  auto s = holes_only(1);
  s.noise_variance = 1.0;
  Allocation a;
  a.assign = {0};
  EXPECT_DOUBLE_EQ(aggregate_gains(a, ch, s)[0], 5.0);
  s.noise_variance = 2.0;
  EXPECT_DOUBLE_EQ(aggregate_gains(a, ch, s)[0], 2.5);
  s.pu_to_sm_interference_watts = 3.0;
  EXPECT_DOUBLE_EQ(aggregate_gains(a, ch, s)[0], 1.0);
}

TEST(AggregateGains, EqualsExplicitIndicatorSum) {
  const auto s = generate_spectrum(31, 32, 3, {16, 20});
  const auto ch = generate_channels(32, s, 3);
  const auto a = allocate_subbands(ch, s, 3);
  const auto g = aggregate_gains(a, ch, s);
  for (int n = 0; n < s.n_sm(); ++n) {
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double c = a.assign[n] == k ? 1.0 : 0.0;
      sum += c * ch.g_ss(k, n) / (s.noise_variance + s.pu_to_sm_interference_watts);
    }
    EXPECT_DOUBLE_EQ(g[n], sum);
  }
}

TEST(UpdateSmRates, SumsPerOwner) {
  const auto ch = from_rows({{1, 1, 1}, {1, 1, 1}});
  auto s = holes_only(3);
  s.noise_variance = 1.0;
  Allocation a;
  a.assign = {0, 1, 0};
  a.powers = {1.0, 3.0, 7.0};
  update_sm_rates(a, aggregate_gains(a, ch, s), 2.0, 2);
  EXPECT_DOUBLE_EQ(a.per_sm_rate[0], 2.0 * (1.0 + 3.0));
  EXPECT_DOUBLE_EQ(a.per_sm_rate[1], 2.0 * 2.0);
}

TEST(Allocate, ProvisionalPowerSteersFairness) {
  // rates from p_max / N_SM are compared nonlinearly, so the budget can reorder the fairness phase
  int differ = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto s = generate_spectrum(seed, 32, 3, {16, 20});
    const auto ch = generate_channels(seed, s, 4);
    s.p_max_watts = 0.01;
    const auto low = allocate_subbands(ch, s, 4).assign;
    s.p_max_watts = 100.0;
    differ += low != allocate_subbands(ch, s, 4).assign;
  }
  EXPECT_GT(differ, 0);
}
