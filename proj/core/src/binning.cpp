#include "tradepack/binning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tradepack/error.hpp"

namespace tradepack {

std::vector<std::pair<std::size_t, std::size_t>> equal_count_ranges(std::size_t n,
                                                                    std::size_t n_bins) {
  if (n_bins == 0) throw Error(ErrorCode::InvalidArgument, "n_bins must be positive");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) {
    out.emplace_back(n * b / n_bins, n * (b + 1) / n_bins);
  }
  return out;
}

std::vector<std::size_t> stable_order(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  return order;
}

namespace {

void check_inputs(std::span<const double> x, std::span<const double> y, std::size_t n_bins) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::InvalidArgument, "conditioning and response sizes differ");
  }
  if (n_bins == 0) throw Error(ErrorCode::InvalidArgument, "n_bins must be positive");
  if (x.size() < n_bins) {
    throw Error(ErrorCode::TooFewSamples,
                std::to_string(x.size()) + " samples for " + std::to_string(n_bins) + " bins");
  }
}

}  // namespace

BinnedSeries binned_conditional_mean(std::span<const double> x, std::span<const double> y,
                                     std::size_t n_bins) {
  check_inputs(x, y, n_bins);
  const auto order = stable_order(x);
  BinnedSeries series;
  series.bins.reserve(n_bins);
  for (const auto& [begin, end] : equal_count_ranges(x.size(), n_bins)) {
    Bin bin;
    bin.count = end - begin;
    bin.lower = x[order[begin]];
    bin.upper = x[order[end - 1]];
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      sx += x[order[k]];
      sy += y[order[k]];
    }
    const double n = static_cast<double>(bin.count);
    bin.condition_mean = sx / n;
    bin.response_mean = sy / n;
    if (bin.count > 1) {
      double ss = 0.0;
      for (std::size_t k = begin; k < end; ++k) {
        const double dy = y[order[k]] - bin.response_mean;
        ss += dy * dy;
      }
      bin.response_stderr = std::sqrt(ss / (n - 1.0) / n);
    }
    series.bins.push_back(bin);
  }
  return series;
}

std::vector<std::vector<double>> binned_groups(std::span<const double> x,
                                               std::span<const double> y, std::size_t n_bins) {
  check_inputs(x, y, n_bins);
  const auto order = stable_order(x);
  std::vector<std::vector<double>> groups;
  groups.reserve(n_bins);
  for (const auto& [begin, end] : equal_count_ranges(x.size(), n_bins)) {
    auto& g = groups.emplace_back();
    g.reserve(end - begin);
    for (std::size_t k = begin; k < end; ++k) g.push_back(y[order[k]]);
  }
  return groups;
}

}  // namespace tradepack
