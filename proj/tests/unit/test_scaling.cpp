#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tradepack/error.hpp"
#include "tradepack/scaling.hpp"

using namespace tradepack;

namespace {

BinnedSeries exact_series(double a, double g, std::size_t n) {
  BinnedSeries s;
  for (std::size_t i = 0; i < n; ++i) {
    Bin b;
    b.condition_mean = std::pow(2.0, static_cast<double>(i));
    b.response_mean = a * std::pow(b.condition_mean, g);
    b.count = 10;
    s.bins.push_back(b);
  }
  return s;
}

}  // namespace

TEST(Scaling, WindowTakesTopFraction) {
  const auto s = exact_series(1, 1, 20);
  EXPECT_EQ(window_bins(s, {}).size(), 10u);
  EXPECT_EQ(window_bins(s, {}).front(), 10u);
  FitWindow w{.top_fraction = 0.25};
  EXPECT_EQ(window_bins(s, w).size(), 5u);
  w = {.top_fraction = 1.0, .min_condition = 3.0, .max_condition = 100.0};
  EXPECT_EQ(window_bins(s, w), (std::vector<std::size_t>{2, 3, 4, 5, 6}));
}

TEST(Scaling, ExactPowerLawIsRecovered) {
  const auto f = fit_loglog_powerlaw(exact_series(3.0, 0.74, 20), {.top_fraction = 1.0});
  EXPECT_NEAR(f.exponent, 0.74, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-10);
  EXPECT_NEAR(f.exponent_stderr, 0.0, 1e-10);
  EXPECT_EQ(f.bins_used, 20u);
}

TEST(Scaling, RejectsBadWindows) {
  auto s = exact_series(1.0, 1.0, 4);
  EXPECT_THROW(fit_loglog_powerlaw(s, {}), Error);
  s.bins[3].response_mean = 0.0;
  try {
    fit_loglog_powerlaw(s, {.top_fraction = 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveMean);
  }
}

TEST(Scaling, DeterministicPackagesGiveConsistentExponents) {
  std::vector<double> t, n, v;
  for (int i = 0; i < 2000; ++i) {
    const double vi = 1000.0 * std::exp(0.003 * i);
    const double ni = std::pow(vi, 0.7);
    v.push_back(vi);
    n.push_back(ni);
    t.push_back(std::pow(ni, 0.2));
  }
  const auto r = scaling_exponents(t, n, v, {.n_bins = 20, .window = {.top_fraction = 1.0}});
  EXPECT_NEAR(r.g2.exponent, 0.7, 1e-3);
  EXPECT_NEAR(r.g3.exponent, 0.2, 1e-3);
  EXPECT_NEAR(r.g1.exponent, 0.14, 1e-3);
  EXPECT_LT(r.product_gap, 1e-3);
}

TEST(Scaling, GapStderrPropagatesAllThree) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z(0.0, 0.2);
  std::vector<double> t, n, v;
  for (int i = 0; i < 5000; ++i) {
    const double vi = 1000.0 * std::exp(0.001 * i);
    const double ni = std::pow(vi, 0.7) * std::exp(z(rng));
    v.push_back(vi);
    n.push_back(ni);
    t.push_back(std::pow(ni, 0.2) * std::exp(z(rng)));
  }
  const auto r = scaling_exponents(t, n, v);
  const double expected = std::sqrt(std::pow(r.g1.exponent_stderr, 2) +
                                    std::pow(r.g3.exponent * r.g2.exponent_stderr, 2) +
                                    std::pow(r.g2.exponent * r.g3.exponent_stderr, 2));
  EXPECT_NEAR(r.gap_stderr, expected, 1e-14);
  EXPECT_NEAR(r.product_gap, std::abs(r.g1.exponent - r.g2.exponent * r.g3.exponent), 1e-14);
}
