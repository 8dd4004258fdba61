#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tradepack {

/// Dense row-major design matrix.
class DesignMatrix {
 public:
  DesignMatrix() = default;
  DesignMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), v_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return v_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }
  std::span<const double> values() const noexcept { return v_; }

  /// Appends one row; the first call fixes the column count.
  void push_row(std::span<const double> row);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> v_;
};

inline constexpr double kCriticalT5 = 1.96;  // two-sided 5%, large sample

struct OlsResult {
  std::vector<double> coefficients;   // 0 for dropped columns
  std::vector<double> std_errors;     // NaN for dropped columns
  std::vector<double> t_stats;        // 0 for dropped columns
  std::vector<bool> significant;      // |t| >= 1.96
  std::vector<bool> dropped;          // removed as collinear
  std::vector<double> covariance;     // cols x cols, row-major; NaN rows/cols for dropped
  double r_squared = 0.0;             // centered when a constant column is kept
  double residual_variance = 0.0;     // SSR / (n - k)
  std::size_t n_obs = 0;
  std::size_t n_params = 0;           // kept columns

  std::size_t dropped_count() const;
};

struct OlsOptions {
  bool drop_collinear = false;  // otherwise rank deficiency throws RankDeficient
};

/// Least squares via column-pivoting QR with classical (homoskedastic)
/// standard errors. Requires more observations than kept parameters.
OlsResult ols(const DesignMatrix& x, std::span<const double> y, const OlsOptions& options = {});

}  // namespace tradepack
