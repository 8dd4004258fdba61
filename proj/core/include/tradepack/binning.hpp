#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace tradepack {

struct Bin {
  double lower = 0.0;             // smallest conditioning value in the bin
  double upper = 0.0;             // largest conditioning value in the bin
  double condition_mean = 0.0;
  double response_mean = 0.0;
  double response_stderr = 0.0;   // sample std / sqrt(count); 0 for a single value
  std::size_t count = 0;
};

/// Equal-occupancy bins over a conditioning variable, ascending.
struct BinnedSeries {
  std::vector<Bin> bins;
};

/// Half-open index ranges splitting n items into n_bins chunks whose sizes
/// differ by at most one.
std::vector<std::pair<std::size_t, std::size_t>> equal_count_ranges(std::size_t n,
                                                                    std::size_t n_bins);

/// Permutation that sorts x ascending; ties keep their input order.
std::vector<std::size_t> stable_order(std::span<const double> x);

/// Sorts (x, y) pairs on x, cuts them into n_bins equal-count bins and
/// averages both coordinates per bin. Throws TooFewSamples if |x| < n_bins.
BinnedSeries binned_conditional_mean(std::span<const double> x, std::span<const double> y,
                                     std::size_t n_bins = 20);

/// The response values falling in each bin of binned_conditional_mean.
std::vector<std::vector<double>> binned_groups(std::span<const double> x,
                                               std::span<const double> y, std::size_t n_bins = 20);

}  // namespace tradepack
