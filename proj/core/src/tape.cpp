#include "tradepack/tape.hpp"

#include <algorithm>
#include <tuple>

namespace tradepack {

namespace {

auto print_key(const TradeRecord& r) {
  return std::tie(r.time, r.investor, r.side, r.aggressor, r.price, r.volume);
}

}  // namespace

MarketTape::MarketTape(std::span<const TradeRecord> records) {
  for (const auto& r : records) by_stock_[r.stock].prints.push_back(r);
  for (auto& [stock, series] : by_stock_) {
    std::sort(series.prints.begin(), series.prints.end(),
              [](const TradeRecord& a, const TradeRecord& b) { return print_key(a) < print_key(b); });
    long double total = 0.0L;
    for (const auto& p : series.prints) total += static_cast<long double>(p.volume);
    series.mean_volume = static_cast<double>(total / static_cast<long double>(series.prints.size()));
  }
}

std::vector<StockCode> MarketTape::stocks() const {
  std::vector<StockCode> out;
  out.reserve(by_stock_.size());
  for (const auto& entry : by_stock_) out.push_back(entry.first);
  return out;
}

const MarketTape::Series* MarketTape::find(const StockCode& stock) const {
  const auto it = by_stock_.find(stock);
  return it == by_stock_.end() ? nullptr : &it->second;
}

std::span<const TradeRecord> MarketTape::trades(const StockCode& stock) const {
  const Series* s = find(stock);
  if (s == nullptr) return {};
  return s->prints;
}

std::span<const TradeRecord> MarketTape::same_second(const StockCode& stock,
                                                     const Timestamp& time) const {
  const auto all = trades(stock);
  const auto lo = std::lower_bound(all.begin(), all.end(), time,
                                   [](const TradeRecord& r, const Timestamp& t) { return r.time < t; });
  const auto hi = std::upper_bound(lo, all.end(), time,
                                   [](const Timestamp& t, const TradeRecord& r) { return t < r.time; });
  return {lo, hi};
}

std::optional<double> MarketTape::price_before(const StockCode& stock, const Timestamp& time) const {
  const auto all = trades(stock);
  const auto lo = std::lower_bound(all.begin(), all.end(), time,
                                   [](const TradeRecord& r, const Timestamp& t) { return r.time < t; });
  if (lo == all.begin()) return std::nullopt;
  const auto& prev = *(lo - 1);
  if (prev.time.date != time.date) return std::nullopt;
  return prev.price;
}

double MarketTape::mean_volume(const StockCode& stock) const {
  const Series* s = find(stock);
  if (s == nullptr) throw Error(ErrorCode::InvalidArgument, "stock " + stock.str() + " not on tape");
  return s->mean_volume;
}

std::vector<TradeRecord> concurrent_prints(const MarketTape& tape, const TradeRecord& trade) {
  std::vector<TradeRecord> out;
  for (const auto& p : tape.same_second(trade.stock, trade.time)) {
    if (p.investor != trade.investor && p.aggressor == Aggressor::MarketOrder) out.push_back(p);
  }
  return out;
}

}  // namespace tradepack
