#include "tradepack/scaling.hpp"

#include <cmath>

#include "tradepack/ols.hpp"

namespace tradepack {

std::vector<std::size_t> window_bins(const BinnedSeries& series, const FitWindow& window) {
  if (!(window.top_fraction > 0.0 && window.top_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "window top fraction must lie in (0, 1]");
  }
  const std::size_t n = series.bins.size();
  const auto take = static_cast<std::size_t>(std::ceil(window.top_fraction * static_cast<double>(n) - 1e-9));
  std::vector<std::size_t> out;
  for (std::size_t b = n - std::min(take, n); b < n; ++b) {
    const double m = series.bins[b].condition_mean;
    if (window.min_condition && m < *window.min_condition) continue;
    if (window.max_condition && m > *window.max_condition) continue;
    out.push_back(b);
  }
  return out;
}

LogLogFit fit_loglog_powerlaw(const BinnedSeries& series, const FitWindow& window) {
  const auto bins = window_bins(series, window);
  if (bins.size() < 3) {
    throw Error(ErrorCode::TooFewSamples, "log-log fit needs at least three bins in the window");
  }
  DesignMatrix x;
  std::vector<double> y;
  for (std::size_t b : bins) {
    const auto& bin = series.bins[b];
    if (!(bin.condition_mean > 0.0) || !(bin.response_mean > 0.0)) {
      throw Error(ErrorCode::NonPositiveMean,
                  "bin " + std::to_string(b) + " has a non-positive mean inside the fit window");
    }
    const double row[2] = {1.0, std::log(bin.condition_mean)};
    x.push_row(row);
    y.push_back(std::log(bin.response_mean));
  }
  const auto fit = ols(x, y);
  LogLogFit out;
  out.intercept = fit.coefficients[0];
  out.intercept_stderr = fit.std_errors[0];
  out.exponent = fit.coefficients[1];
  out.exponent_stderr = fit.std_errors[1];
  out.bins_used = bins.size();
  return out;
}

ScalingResult scaling_exponents(std::span<const double> t, std::span<const double> n,
                                std::span<const double> v, const ScalingOptions& options) {
  if (t.size() != n.size() || t.size() != v.size()) {
    throw Error(ErrorCode::InvalidArgument, "T, N and V must have equal length");
  }
  ScalingResult r;
  r.t_given_v = binned_conditional_mean(v, t, options.n_bins);
  r.n_given_v = binned_conditional_mean(v, n, options.n_bins);
  r.t_given_n = binned_conditional_mean(n, t, options.n_bins);
  r.g1 = fit_loglog_powerlaw(r.t_given_v, options.window);
  r.g2 = fit_loglog_powerlaw(r.n_given_v, options.window);
  r.g3 = fit_loglog_powerlaw(r.t_given_n, options.window);
  r.product_gap = std::abs(r.g1.exponent - r.g2.exponent * r.g3.exponent);
  const double s1 = r.g1.exponent_stderr;
  const double s2 = r.g3.exponent * r.g2.exponent_stderr;
  const double s3 = r.g2.exponent * r.g3.exponent_stderr;
  r.gap_stderr = std::sqrt(s1 * s1 + s2 * s2 + s3 * s3);
  return r;
}

ScalingResult scaling_exponents(std::span<const TradePackage> packages,
                                const ScalingOptions& options) {
  std::vector<double> t;
  std::vector<double> n;
  std::vector<double> v;
  t.reserve(packages.size());
  n.reserve(packages.size());
  v.reserve(packages.size());
  for (const auto& p : packages) {
    t.push_back(static_cast<double>(p.execution_seconds));
    n.push_back(static_cast<double>(p.trade_count));
    v.push_back(static_cast<double>(p.total_volume));
  }
  return scaling_exponents(t, n, v, options);
}

}  // namespace tradepack
