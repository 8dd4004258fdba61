#include "tradepack/ols.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "tradepack/error.hpp"

namespace tradepack {

void DesignMatrix::push_row(std::span<const double> row) {
  if (rows_ == 0 && cols_ == 0) cols_ = row.size();
  if (row.size() != cols_) throw Error(ErrorCode::InvalidArgument, "row width mismatch");
  v_.insert(v_.end(), row.begin(), row.end());
  ++rows_;
}

std::size_t OlsResult::dropped_count() const {
  return static_cast<std::size_t>(std::count(dropped.begin(), dropped.end(), true));
}

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

bool is_constant_column(const Eigen::MatrixXd& x, Eigen::Index c) {
  const double first = x(0, c);
  if (first == 0.0) return false;
  for (Eigen::Index r = 1; r < x.rows(); ++r) {
    if (x(r, c) != first) return false;
  }
  return true;
}

}  // namespace

OlsResult ols(const DesignMatrix& design, std::span<const double> y, const OlsOptions& options) {
  const auto n = static_cast<Eigen::Index>(design.rows());
  const auto p = static_cast<Eigen::Index>(design.cols());
  if (static_cast<std::size_t>(n) != y.size()) {
    throw Error(ErrorCode::InvalidArgument, "response length differs from design rows");
  }
  if (p == 0) throw Error(ErrorCode::InvalidArgument, "design has no columns");
  if (n <= p) {
    throw Error(ErrorCode::TooFewSamples, std::to_string(n) + " observations for " +
                                              std::to_string(p) + " parameters");
  }
  const Eigen::MatrixXd x = Eigen::Map<const RowMajor>(design.values().data(), n, p);
  const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), n);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> pivoted(x);
  pivoted.setThreshold(1e-10);
  const Eigen::Index rank = pivoted.rank();
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = 0; k < rank; ++k) kept.push_back(pivoted.colsPermutation().indices()(k));
  std::sort(kept.begin(), kept.end());
  if (rank < p && !options.drop_collinear) {
    throw Error(ErrorCode::RankDeficient,
                "design rank " + std::to_string(rank) + " < " + std::to_string(p) + " columns");
  }
  if (rank == 0) throw Error(ErrorCode::RankDeficient, "design matrix is zero");

  const auto k = static_cast<Eigen::Index>(kept.size());
  Eigen::MatrixXd xk(n, k);
  for (Eigen::Index j = 0; j < k; ++j) xk.col(j) = x.col(kept[j]);

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(xk);
  const Eigen::VectorXd beta = qr.solve(yv);
  const Eigen::VectorXd resid = yv - xk * beta;
  const double ssr = resid.squaredNorm();
  const double sigma2 = ssr / static_cast<double>(n - k);

  const Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd xtx_inv = r_inv * r_inv.transpose();

  bool has_constant = false;
  for (Eigen::Index j = 0; j < k; ++j) has_constant = has_constant || is_constant_column(xk, j);
  const double sst = has_constant ? (yv.array() - yv.mean()).square().sum() : yv.squaredNorm();

  const double nan = std::numeric_limits<double>::quiet_NaN();
  OlsResult out;
  out.n_obs = static_cast<std::size_t>(n);
  out.n_params = static_cast<std::size_t>(k);
  out.residual_variance = sigma2;
  out.r_squared = sst > 0.0 ? std::clamp(1.0 - ssr / sst, 0.0, 1.0) : (ssr == 0.0 ? 1.0 : 0.0);
  out.coefficients.assign(p, 0.0);
  out.std_errors.assign(p, nan);
  out.t_stats.assign(p, 0.0);
  out.significant.assign(p, false);
  out.dropped.assign(p, true);
  out.covariance.assign(static_cast<std::size_t>(p * p), nan);
  for (Eigen::Index a = 0; a < k; ++a) {
    const auto ca = static_cast<std::size_t>(kept[a]);
    out.dropped[ca] = false;
    out.coefficients[ca] = beta(a);
    for (Eigen::Index b = 0; b < k; ++b) {
      out.covariance[ca * p + static_cast<std::size_t>(kept[b])] = sigma2 * xtx_inv(a, b);
    }
    const double se = std::sqrt(sigma2 * xtx_inv(a, a));
    out.std_errors[ca] = se;
    if (se > 0.0) {
      out.t_stats[ca] = beta(a) / se;
    } else if (beta(a) != 0.0) {
      out.t_stats[ca] = std::copysign(std::numeric_limits<double>::infinity(), beta(a));
    }
    out.significant[ca] = std::abs(out.t_stats[ca]) >= kCriticalT5;
  }
  return out;
}

}  // namespace tradepack
