#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tradepack/anova.hpp"
#include "tradepack/error.hpp"

using namespace tradepack;

TEST(Anova, MatchesTwoPassFormula) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<std::vector<double>> groups(2 + rep % 5);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      groups[g].resize(3 + (rep + g) % 7);
      for (double& v : groups[g]) v = 0.2 * static_cast<double>(g) + z(rng);
    }
    const auto r = anova_oneway(groups);
    const auto ref = tptest::oracle::two_pass_anova(groups);
    EXPECT_NEAR(r.f, ref.f, 1e-10 * std::max(1.0, ref.f));
    EXPECT_NEAR(r.ss_between, ref.ss_between, 1e-10);
    EXPECT_NEAR(r.ss_within, ref.ss_within, 1e-10);
  }
}

TEST(Anova, KnownCriticalValue) {
  // F(2, 10) = 4.1028 is the 5% critical value.
  std::vector<std::vector<double>> g{{-1, 1, -1, 1}, {-1, 1, -1, 1}, {-1, 1, -1, 1, 0}};
  auto r = anova_oneway(g);
  EXPECT_EQ(r.df_between, 2u);
  EXPECT_EQ(r.df_within, 10u);
  const double ms_within = r.ss_within / 10.0;
  // Shift group means by +-d so that SSB/2 / MSW = 4.1028 with means -d, +d, 0.
  const double d = std::sqrt(4.1028 * ms_within * 2.0 / 8.0);
  for (double& v : g[0]) v -= d;
  for (double& v : g[1]) v += d;
  r = anova_oneway(g);
  EXPECT_NEAR(r.f, 4.1028, 1e-3);
  EXPECT_NEAR(r.p_value, 0.05, 1e-4);
}

TEST(Anova, DegenerateGroups) {
  std::vector<std::vector<double>> same{{1, 1}, {1, 1}};
  auto r = anova_oneway(same);
  EXPECT_TRUE(r.degenerate);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0);
  std::vector<std::vector<double>> apart{{1, 1}, {2, 2}};
  r = anova_oneway(apart);
  EXPECT_TRUE(r.degenerate);
  EXPECT_TRUE(std::isinf(r.f));
  EXPECT_DOUBLE_EQ(r.p_value, 0.0);
}

TEST(Anova, RejectsTinyInput) {
  std::vector<std::vector<double>> one{{1, 2, 3}};
  EXPECT_THROW(anova_oneway(one), Error);
  std::vector<std::vector<double>> small{{1}, {2, 3}};
  EXPECT_THROW(anova_oneway(small), Error);
}
