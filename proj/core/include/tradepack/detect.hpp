#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <variant>
#include <vector>

#include "tradepack/ingest.hpp"

namespace tradepack {

struct DetectorConfig {
  int break_days = 1;            // n: a gap of >= n trading days ends a package
  double theta = 0.75;           // dominant-side volume fraction must exceed this
  int min_market_trades = 5;     // N_m must exceed this
  bool one_day_only = false;     // keep only packages inside one trading day

  /// Throws InvalidArgument unless n >= 1, 0.5 < theta <= 1, min_market_trades >= 0.
  void validate() const;
};

/// Trading days observed in a dataset, in order. Gaps between trades are
/// counted in these days, so weekends and holidays do not break packages.
class TradingCalendar {
 public:
  TradingCalendar() = default;
  explicit TradingCalendar(std::vector<Date> dates);
  static TradingCalendar from_records(std::span<const TradeRecord> records);

  /// Index of `date`; throws InvalidArgument for dates not in the calendar.
  std::int32_t index_of(Date date) const;
  std::size_t size() const noexcept { return dates_.size(); }
  std::span<const Date> dates() const noexcept { return dates_; }

 private:
  std::vector<Date> dates_;
};

struct TradePackage {
  StockCode stock;
  std::uint64_t investor = 0;
  InvestorType investor_type = InvestorType::Individual;
  int sign = 1;                         // +1 buy-dominant, -1 sell-dominant
  std::vector<TradeRecord> trades;      // time-ordered
  std::int64_t execution_seconds = 0;   // T, trading-clock seconds
  std::size_t trade_count = 0;          // N, all trades
  std::size_t market_trades = 0;        // N_m
  std::int64_t total_volume = 0;        // V
  double market_fraction = 0.0;         // F_m, market-order share of V
  double t_ini = 0.0;                   // normalized day-time of first trade
  double t_fin = 0.0;                   // normalized day-time of last trade
  bool within_one_day = false;

  const Timestamp& first_time() const { return trades.front().time; }
  const Timestamp& last_time() const { return trades.back().time; }
};

enum class RejectReason { ThetaFail, TooFewMarketOrders };

struct Rejected {
  RejectReason reason;
};

using Classification = std::variant<TradePackage, Rejected>;

/// Splits one investor's time-ordered trades in one stock wherever two
/// consecutive trades are `break_days` or more trading days apart.
std::vector<std::vector<TradeRecord>> segment_investor_trades(
    std::span<const TradeRecord> trades, const TradingCalendar& calendar, int break_days);

/// Applies the side-dominance and market-order rules to one segment.
Classification classify_package(std::vector<TradeRecord> segment, const TradingCalendar& calendar,
                                const DetectorConfig& config);

/// Trading-clock seconds between two in-session timestamps.
std::int64_t trading_seconds_between(const Timestamp& from, const Timestamp& to,
                                     const TradingCalendar& calendar);

struct DetectionReport {
  std::size_t segments = 0;
  std::size_t accepted = 0;
  std::size_t rejected_theta = 0;
  std::size_t rejected_market_orders = 0;
  std::size_t dropped_multi_day = 0;  // accepted but removed by one_day_only
};

/// Packages across all (investor, stock) groups, ordered by (stock, investor,
/// first trade). `records` must already be merged. If `calendar` is empty it
/// is built from `records`.
std::vector<TradePackage> detect_packages(std::span<const TradeRecord> records,
                                          const DetectorConfig& config, int jobs = 1,
                                          DetectionReport* report = nullptr,
                                          const TradingCalendar* calendar = nullptr);

/// Re-checks the three detection rules on a finished package.
bool satisfies_rules(const TradePackage& package, const DetectorConfig& config);

struct PackageStats {
  std::size_t count = 0;  // N_p
  double mean_execution_seconds = 0.0;
  double mean_trade_count = 0.0;
  double mean_total_volume = 0.0;
};

/// Throws EmptyPopulation for an empty span.
PackageStats package_stats(std::span<const TradePackage> packages);

/// Stats per investor type; types with no packages are absent.
std::map<InvestorType, PackageStats> package_stats_by_type(std::span<const TradePackage> packages);

std::vector<TradePackage> filter_by_type(std::span<const TradePackage> packages, InvestorType type);

void write_packages_tsv(std::ostream& out, std::span<const TradePackage> packages);

}  // namespace tradepack
