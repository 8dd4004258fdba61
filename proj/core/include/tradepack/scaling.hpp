#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "tradepack/binning.hpp"
#include "tradepack/detect.hpp"

namespace tradepack {

/// Which bins enter a log-log fit: the top `top_fraction` of bins by index,
/// further restricted to condition means inside [min_condition, max_condition].
struct FitWindow {
  double top_fraction = 0.5;
  std::optional<double> min_condition;
  std::optional<double> max_condition;
};

struct LogLogFit {
  double exponent = 0.0;
  double exponent_stderr = 0.0;
  double intercept = 0.0;   // ln prefactor
  double intercept_stderr = 0.0;
  std::size_t bins_used = 0;
};

/// Indices of the bins selected by `window`, ascending.
std::vector<std::size_t> window_bins(const BinnedSeries& series, const FitWindow& window);

/// OLS of ln(response mean) on ln(condition mean) over the windowed bins.
/// Throws NonPositiveMean if a windowed bin has a mean <= 0 and TooFewSamples
/// with fewer than three bins.
LogLogFit fit_loglog_powerlaw(const BinnedSeries& series, const FitWindow& window = {});

struct ScalingOptions {
  std::size_t n_bins = 20;
  FitWindow window;
};

/// T ~ V^g1, N ~ V^g2, T ~ N^g3.
struct ScalingResult {
  BinnedSeries t_given_v;
  BinnedSeries n_given_v;
  BinnedSeries t_given_n;
  LogLogFit g1;
  LogLogFit g2;
  LogLogFit g3;
  double product_gap = 0.0;    // |g1 - g2 g3|
  double gap_stderr = 0.0;     // first-order propagation of the three stderrs
};

ScalingResult scaling_exponents(std::span<const double> execution_seconds,
                                std::span<const double> trade_counts,
                                std::span<const double> total_volumes,
                                const ScalingOptions& options = {});

ScalingResult scaling_exponents(std::span<const TradePackage> packages,
                                const ScalingOptions& options = {});

}  // namespace tradepack
