#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tradepack/detect.hpp"
#include "tradepack/ols.hpp"

namespace tradepack {

/// Which package transactions feed the signed log-volume channel.
struct TransactionFilter {
  std::optional<InvestorType> investor_type;
  std::optional<Aggressor> aggressor;

  bool accepts(const TradeRecord& trade) const noexcept;
};

/// One stock on a one-second trading-clock grid, day after day. Slot k of day
/// d lives at index d * 14400 + k.
struct SecondGrid {
  StockCode stock;
  std::vector<Date> days;
  std::vector<double> price;         // last print, forward-filled; NaN before the day's first print
  std::vector<double> returns;       // ln p(t) - ln p(t-1), divided by return_scale
  std::vector<double> volume;        // sum of s ln v over selected package transactions
  std::vector<std::uint8_t> event;   // 1 where a selected package transaction occurs
  double return_scale = 1.0;         // std of raw returns over nonzero-return seconds
  std::size_t skipped_days = 0;      // calendar days without a print of this stock

  std::size_t size() const noexcept { return returns.size(); }
};

/// Builds a grid from the stock's prints and its detected packages. Returns
/// are zero on tradeless seconds and on the first print of each session.
/// `calendar`, when given, is used only to count skipped days.
SecondGrid build_second_grid(const StockCode& stock, std::span<const TradeRecord> records,
                             std::span<const TradePackage> packages,
                             const TransactionFilter& filter = {},
                             const TradingCalendar* calendar = nullptr);

/// One grid per stock present in `records`, ordered by stock code.
std::vector<SecondGrid> build_second_grids(std::span<const TradeRecord> records,
                                           std::span<const TradePackage> packages,
                                           const TransactionFilter& filter = {}, int jobs = 1);

inline const std::vector<int> kDefaultLags{0, 5, 10, 15, 20, 25};

struct LaggedOptions {
  std::vector<int> lags = kDefaultLags;
  /// Only t at least this many seconds after its session start; with 25 the
  /// lag-0 sample matches the AR model's observation set.
  int min_history = 0;
  std::size_t min_events = 100;
};

struct LagFit {
  int lag = 0;
  OlsResult fit;  // coefficients: intercept, beta

  double beta() const { return fit.coefficients[1]; }
  double beta_stderr() const { return fit.std_errors[1]; }
  double beta_t() const { return fit.t_stats[1]; }
  bool beta_significant() const { return fit.significant[1]; }
};

/// Per lag i, OLS of R(t+i) on [1, x(t)] over event seconds t whose t+i stays
/// inside the same session. Throws TooFewSamples below min_events events.
std::vector<LagFit> regress_lagged_volume(const SecondGrid& grid, const LaggedOptions& options = {});

enum class ObservationSet { PackageSeconds, AllSeconds };

struct ArOptions {
  std::vector<int> return_lags{5, 10, 15, 20, 25};
  std::vector<int> volume_lags = kDefaultLags;
  ObservationSet observations = ObservationSet::PackageSeconds;
  std::size_t min_events = 100;
};

struct ArFit {
  std::vector<std::string> names;  // "const", "R-5", ..., "x-0", ...
  OlsResult fit;
};

/// OLS of R(t) on an intercept, R(t-j) and x(t-i). Every lag must stay inside
/// t's session. Collinear columns are dropped and flagged in fit.dropped.
ArFit regress_ar_volume(const SecondGrid& grid, const ArOptions& options = {});

/// Columns per lag: beta, t, then n and R^2 of the lag-0 fit.
void write_lagged_tsv(std::ostream& out, std::span<const SecondGrid> grids,
                      std::span<const std::vector<LagFit>> fits);
/// Columns per regressor: coefficient and t, then n and R^2.
void write_ar_tsv(std::ostream& out, std::span<const SecondGrid> grids, std::span<const ArFit> fits);

}  // namespace tradepack
