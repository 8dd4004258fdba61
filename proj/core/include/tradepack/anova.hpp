#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tradepack {

struct AnovaResult {
  double f = 0.0;
  double p_value = 1.0;
  std::size_t df_between = 0;   // k - 1
  std::size_t df_within = 0;    // n - k
  double ss_between = 0.0;
  double ss_within = 0.0;
  /// Zero within-group variance: F is +inf (p = 0) when the group means
  /// differ and NaN (p = 1) when they do not.
  bool degenerate = false;
};

/// Classical one-way ANOVA. Needs at least two groups of at least two values.
AnovaResult anova_oneway(std::span<const std::vector<double>> groups);

}  // namespace tradepack
