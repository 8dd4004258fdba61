#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "tradepack/ingest.hpp"

namespace tradepack {

/// All prints of each stock ordered by (timestamp, investor, side, aggressor,
/// price, volume), so "last print in a second" is reproducible.
class MarketTape {
 public:
  MarketTape() = default;
  explicit MarketTape(std::span<const TradeRecord> records);

  std::vector<StockCode> stocks() const;
  std::span<const TradeRecord> trades(const StockCode& stock) const;

  /// Prints of `stock` in the same second as `time`.
  std::span<const TradeRecord> same_second(const StockCode& stock, const Timestamp& time) const;

  /// Price of the last print strictly before the second of `time` on the same day.
  std::optional<double> price_before(const StockCode& stock, const Timestamp& time) const;

  /// Mean share volume over every print of the stock; throws InvalidArgument
  /// for an unknown stock.
  double mean_volume(const StockCode& stock) const;

 private:
  struct Series {
    std::vector<TradeRecord> prints;
    double mean_volume = 0.0;
  };
  const Series* find(const StockCode& stock) const;

  std::map<StockCode, Series> by_stock_;
};

/// Same-second prints of other investors executed as market orders: the
/// trades taken as concurrent with `trade`.
std::vector<TradeRecord> concurrent_prints(const MarketTape& tape, const TradeRecord& trade);

}  // namespace tradepack
