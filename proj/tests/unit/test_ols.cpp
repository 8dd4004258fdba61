#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tradepack/error.hpp"
#include "tradepack/ols.hpp"

using namespace tradepack;

namespace {

struct System {
  DesignMatrix x;
  std::vector<double> raw;
  std::vector<double> y;
};

System random_system(std::uint64_t seed, std::size_t n, std::size_t k) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  System s;
  s.x = DesignMatrix(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    double yi = 0.5;
    for (std::size_t j = 0; j < k; ++j) {
      const double v = j == 0 ? 1.0 : z(rng);
      s.x(i, j) = v;
      s.raw.push_back(v);
      yi += 0.3 * static_cast<double>(j) * v;
    }
    s.y.push_back(yi + z(rng));
  }
  return s;
}

}  // namespace

TEST(Ols, MatchesNormalEquations) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = random_system(seed, 200, 1 + seed % 6);
    const auto fit = ols(s.x, s.y);
    const auto ref = tptest::oracle::normal_equations(s.raw, 200, s.x.cols(), s.y);
    for (std::size_t j = 0; j < s.x.cols(); ++j) {
      EXPECT_NEAR(fit.coefficients[j], ref.beta[j], 1e-10);
      EXPECT_NEAR(fit.std_errors[j], ref.stderr_[j], 1e-10);
      EXPECT_NEAR(fit.t_stats[j], fit.coefficients[j] / fit.std_errors[j], 1e-9);
      EXPECT_EQ(fit.significant[j], std::abs(fit.t_stats[j]) >= kCriticalT5);
    }
    if (s.x.cols() > 1) EXPECT_NEAR(fit.r_squared, ref.r_squared, 1e-10);
    EXPECT_EQ(fit.n_obs, 200u);
  }
}

TEST(Ols, CoefficientsScaleWithRegressors) {
  auto s = random_system(3, 150, 4);
  const auto base = ols(s.x, s.y);
  for (std::size_t i = 0; i < s.x.rows(); ++i) s.x(i, 2) *= 10.0;
  const auto scaled = ols(s.x, s.y);
  EXPECT_NEAR(scaled.coefficients[2], base.coefficients[2] / 10.0, 1e-12);
  EXPECT_NEAR(scaled.t_stats[2], base.t_stats[2], 1e-9);
  EXPECT_NEAR(scaled.r_squared, base.r_squared, 1e-12);
}

// Frisch-Waugh-Lovell: the coefficient on x2 equals the slope of the
// residualized y on the residualized x2.
TEST(Ols, FrischWaughLovell) {
  const auto s = random_system(9, 300, 3);
  const auto full = ols(s.x, s.y);
  DesignMatrix base(300, 2);
  std::vector<double> x2(300);
  for (std::size_t i = 0; i < 300; ++i) {
    base(i, 0) = 1.0;
    base(i, 1) = s.x(i, 1);
    x2[i] = s.x(i, 2);
  }
  const auto on_y = ols(base, s.y);
  const auto on_x2 = ols(base, x2);
  std::vector<double> ey(300);
  DesignMatrix ex(300, 1);
  for (std::size_t i = 0; i < 300; ++i) {
    ey[i] = s.y[i] - on_y.coefficients[0] - on_y.coefficients[1] * s.x(i, 1);
    ex(i, 0) = x2[i] - on_x2.coefficients[0] - on_x2.coefficients[1] * s.x(i, 1);
  }
  EXPECT_NEAR(ols(ex, ey).coefficients[0], full.coefficients[2], 1e-10);
}

TEST(Ols, CollinearColumnsAreDroppedOrRejected) {
  auto s = random_system(4, 100, 3);
  DesignMatrix x(100, 4);
  for (std::size_t i = 0; i < 100; ++i) {
    for (std::size_t j = 0; j < 3; ++j) x(i, j) = s.x(i, j);
    x(i, 3) = 2.0 * s.x(i, 1) - s.x(i, 2);
  }
  EXPECT_THROW(ols(x, s.y), Error);
  const auto fit = ols(x, s.y, {.drop_collinear = true});
  EXPECT_EQ(fit.dropped_count(), 1u);
  EXPECT_EQ(fit.n_params, 3u);
  const auto reduced = ols(s.x, s.y);
  EXPECT_NEAR(fit.r_squared, reduced.r_squared, 1e-10);
}

TEST(Ols, NeedsMoreRowsThanParameters) {
  DesignMatrix x(2, 2);
  x(0, 0) = x(1, 0) = 1.0;
  x(0, 1) = 1.0;
  x(1, 1) = 2.0;
  std::vector<double> y{1.0, 2.0};
  EXPECT_THROW(ols(x, y), Error);
}

TEST(Ols, PushRowFixesWidth) {
  DesignMatrix x;
  const std::vector<double> a{1, 2}, b{1, 2, 3};
  x.push_row(a);
  EXPECT_EQ(x.cols(), 2u);
  EXPECT_THROW(x.push_row(b), Error);
}
