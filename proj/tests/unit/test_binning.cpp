#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "tradepack/binning.hpp"
#include "tradepack/error.hpp"

using namespace tradepack;

TEST(Binning, RangesPartitionEvenly) {
  for (std::size_t n : {20u, 21u, 39u, 100u, 1001u}) {
    const auto r = equal_count_ranges(n, 20);
    ASSERT_EQ(r.size(), 20u);
    EXPECT_EQ(r.front().first, 0u);
    EXPECT_EQ(r.back().second, n);
    std::size_t lo = n, hi = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i > 0) EXPECT_EQ(r[i].first, r[i - 1].second);
      lo = std::min(lo, r[i].second - r[i].first);
      hi = std::max(hi, r[i].second - r[i].first);
    }
    EXPECT_LE(hi - lo, 1u);
  }
}

TEST(Binning, StableOrderKeepsTies) {
  const std::vector<double> x{3, 1, 2, 1, 3};
  EXPECT_EQ(stable_order(x), (std::vector<std::size_t>{1, 3, 2, 0, 4}));
}

TEST(Binning, ConditionalMeanMatchesDirectComputation) {
  std::mt19937_64 rng(5);
  std::vector<double> x(1000), y(1000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i);
  std::shuffle(x.begin(), x.end(), rng);
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = 2.0 * x[i];
  const auto s = binned_conditional_mean(x, y, 10);
  ASSERT_EQ(s.bins.size(), 10u);
  for (std::size_t b = 0; b < 10; ++b) {
    EXPECT_EQ(s.bins[b].count, 100u);
    EXPECT_DOUBLE_EQ(s.bins[b].lower, 100.0 * b);
    EXPECT_DOUBLE_EQ(s.bins[b].upper, 100.0 * b + 99);
    EXPECT_NEAR(s.bins[b].condition_mean, 100.0 * b + 49.5, 1e-12);
    EXPECT_NEAR(s.bins[b].response_mean, 2 * (100.0 * b + 49.5), 1e-9);
    // std of 0..99 scaled by 2 over sqrt(100).
    EXPECT_NEAR(s.bins[b].response_stderr, 2.0 * std::sqrt(100.0 * 101.0 / 12.0) / 10.0, 1e-9);
  }
}

TEST(Binning, GroupsMatchBins) {
  std::vector<double> x{5, 4, 3, 2, 1, 0}, y{50, 40, 30, 20, 10, 0};
  const auto g = binned_groups(x, y, 3);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0], (std::vector<double>{0, 10}));
  EXPECT_EQ(g[2], (std::vector<double>{40, 50}));
}

TEST(Binning, TooFewSamplesThrows) {
  std::vector<double> x{1, 2}, y{1, 2};
  EXPECT_THROW(binned_conditional_mean(x, y, 3), Error);
}
