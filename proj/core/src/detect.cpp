#include "tradepack/detect.hpp"

#include <algorithm>
#include <ostream>

#include "tradepack/parallel.hpp"
#include "tradepack/text.hpp"

namespace tradepack {

void DetectorConfig::validate() const {
  if (break_days < 1) throw Error(ErrorCode::InvalidArgument, "break_days must be >= 1");
  if (!(theta > 0.5 && theta <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "theta must lie in (0.5, 1]");
  }
  if (min_market_trades < 0) {
    throw Error(ErrorCode::InvalidArgument, "min_market_trades must be >= 0");
  }
}

TradingCalendar::TradingCalendar(std::vector<Date> dates) : dates_(std::move(dates)) {
  std::sort(dates_.begin(), dates_.end());
  dates_.erase(std::unique(dates_.begin(), dates_.end()), dates_.end());
}

TradingCalendar TradingCalendar::from_records(std::span<const TradeRecord> records) {
  std::vector<Date> dates;
  dates.reserve(records.size());
  for (const auto& r : records) dates.push_back(r.time.date);
  return TradingCalendar(std::move(dates));
}

std::int32_t TradingCalendar::index_of(Date date) const {
  const auto it = std::lower_bound(dates_.begin(), dates_.end(), date);
  if (it == dates_.end() || *it != date) {
    throw Error(ErrorCode::InvalidArgument, "date " + date.to_string() + " not in calendar");
  }
  return static_cast<std::int32_t>(it - dates_.begin());
}

std::int64_t trading_seconds_between(const Timestamp& from, const Timestamp& to,
                                     const TradingCalendar& calendar) {
  const std::int64_t days = calendar.index_of(to.date) - calendar.index_of(from.date);
  return days * day_clock::kDaySeconds + day_clock::offset(to.seconds) -
         day_clock::offset(from.seconds);
}

std::vector<std::vector<TradeRecord>> segment_investor_trades(std::span<const TradeRecord> trades,
                                                              const TradingCalendar& calendar,
                                                              int break_days) {
  std::vector<std::vector<TradeRecord>> segments;
  if (trades.empty()) return segments;
  segments.emplace_back();
  std::int32_t prev_day = calendar.index_of(trades.front().time.date);
  for (const auto& t : trades) {
    const std::int32_t day = calendar.index_of(t.time.date);
    if (day - prev_day >= break_days) segments.emplace_back();
    segments.back().push_back(t);
    prev_day = day;
  }
  return segments;
}

Classification classify_package(std::vector<TradeRecord> segment, const TradingCalendar& calendar,
                                const DetectorConfig& config) {
  std::int64_t buy = 0;
  std::int64_t total = 0;
  std::int64_t market_volume = 0;
  std::size_t market_trades = 0;
  for (const auto& t : segment) {
    total += t.volume;
    if (t.side == Side::Buy) buy += t.volume;
    if (t.aggressor == Aggressor::MarketOrder) {
      ++market_trades;
      market_volume += t.volume;
    }
  }
  if (segment.empty() || total <= 0) return Rejected{RejectReason::ThetaFail};

  const double buy_fraction = static_cast<double>(buy) / static_cast<double>(total);
  const double sell_fraction = static_cast<double>(total - buy) / static_cast<double>(total);
  int sign = 0;
  if (buy_fraction > config.theta) {
    sign = 1;
  } else if (sell_fraction > config.theta) {
    sign = -1;
  } else {
    return Rejected{RejectReason::ThetaFail};
  }
  if (market_trades <= static_cast<std::size_t>(config.min_market_trades)) {
    return Rejected{RejectReason::TooFewMarketOrders};
  }

  TradePackage p;
  p.stock = segment.front().stock;
  p.investor = segment.front().investor;
  p.investor_type = segment.front().investor_type;
  p.sign = sign;
  p.trade_count = segment.size();
  p.market_trades = market_trades;
  p.total_volume = total;
  p.market_fraction = static_cast<double>(market_volume) / static_cast<double>(total);
  p.execution_seconds =
      trading_seconds_between(segment.front().time, segment.back().time, calendar);
  p.t_ini = day_clock::normalize(segment.front().time.seconds);
  p.t_fin = day_clock::normalize(segment.back().time.seconds);
  p.within_one_day = segment.front().time.date == segment.back().time.date;
  p.trades = std::move(segment);
  return p;
}

bool satisfies_rules(const TradePackage& p, const DetectorConfig& config) {
  if (p.trades.empty()) return false;
  std::int64_t dominant = 0;
  std::int64_t total = 0;
  std::size_t market = 0;
  for (const auto& t : p.trades) {
    total += t.volume;
    if (sign_of(t.side) == p.sign) dominant += t.volume;
    if (t.aggressor == Aggressor::MarketOrder) ++market;
    if (t.investor != p.investor || t.stock != p.stock) return false;
  }
  return static_cast<double>(dominant) / static_cast<double>(total) > config.theta &&
         market > static_cast<std::size_t>(config.min_market_trades) &&
         total == p.total_volume && p.trades.size() == p.trade_count;
}

std::vector<TradePackage> detect_packages(std::span<const TradeRecord> records,
                                          const DetectorConfig& config, int jobs,
                                          DetectionReport* report,
                                          const TradingCalendar* calendar) {
  config.validate();
  const TradingCalendar local =
      calendar && calendar->size() > 0 ? *calendar : TradingCalendar::from_records(records);

  // Group by (investor, stock) without assuming the caller's order.
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = records[a];
    const auto& y = records[b];
    if (x.stock != y.stock) return x.stock < y.stock;
    if (x.investor != y.investor) return x.investor < y.investor;
    return x.time < y.time;
  });
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && records[order[j]].stock == records[order[i]].stock &&
           records[order[j]].investor == records[order[i]].investor) {
      ++j;
    }
    groups.emplace_back(i, j);
    i = j;
  }

  struct GroupResult {
    std::vector<TradePackage> packages;
    DetectionReport report;
  };
  std::vector<GroupResult> results(groups.size());
  parallel_for(groups.size(), jobs, [&](std::size_t g) {
    std::vector<TradeRecord> trades;
    trades.reserve(groups[g].second - groups[g].first);
    for (std::size_t k = groups[g].first; k < groups[g].second; ++k) {
      trades.push_back(records[order[k]]);
    }
    auto& out = results[g];
    for (auto& segment : segment_investor_trades(trades, local, config.break_days)) {
      ++out.report.segments;
      auto c = classify_package(std::move(segment), local, config);
      if (auto* rej = std::get_if<Rejected>(&c)) {
        if (rej->reason == RejectReason::ThetaFail) {
          ++out.report.rejected_theta;
        } else {
          ++out.report.rejected_market_orders;
        }
        continue;
      }
      auto& pkg = std::get<TradePackage>(c);
      ++out.report.accepted;
      if (config.one_day_only && !pkg.within_one_day) {
        ++out.report.dropped_multi_day;
        continue;
      }
      out.packages.push_back(std::move(pkg));
    }
  });

  std::vector<TradePackage> packages;
  DetectionReport total;
  for (auto& r : results) {
    total.segments += r.report.segments;
    total.accepted += r.report.accepted;
    total.rejected_theta += r.report.rejected_theta;
    total.rejected_market_orders += r.report.rejected_market_orders;
    total.dropped_multi_day += r.report.dropped_multi_day;
    for (auto& p : r.packages) packages.push_back(std::move(p));
  }
  if (report) *report = total;
  return packages;
}

PackageStats package_stats(std::span<const TradePackage> packages) {
  if (packages.empty()) throw Error(ErrorCode::EmptyPopulation, "no packages");
  PackageStats s;
  s.count = packages.size();
  for (const auto& p : packages) {
    s.mean_execution_seconds += static_cast<double>(p.execution_seconds);
    s.mean_trade_count += static_cast<double>(p.trade_count);
    s.mean_total_volume += static_cast<double>(p.total_volume);
  }
  const double n = static_cast<double>(s.count);
  s.mean_execution_seconds /= n;
  s.mean_trade_count /= n;
  s.mean_total_volume /= n;
  return s;
}

std::vector<TradePackage> filter_by_type(std::span<const TradePackage> packages,
                                         InvestorType type) {
  std::vector<TradePackage> out;
  for (const auto& p : packages) {
    if (p.investor_type == type) out.push_back(p);
  }
  return out;
}

std::map<InvestorType, PackageStats> package_stats_by_type(std::span<const TradePackage> packages) {
  std::map<InvestorType, PackageStats> out;
  for (auto type : {InvestorType::Institution, InvestorType::Individual}) {
    const auto subset = filter_by_type(packages, type);
    if (!subset.empty()) out[type] = package_stats(subset);
  }
  return out;
}

void write_packages_tsv(std::ostream& out, std::span<const TradePackage> packages) {
  out << "stock\tinvestor\titype\tsign\tT\tN\tN_m\tV\tF_m\tt_ini\tt_fin\tdate_ini\tdate_fin"
         "\twithin_one_day\n";
  for (const auto& p : packages) {
    out << p.stock.view() << '\t' << p.investor << '\t' << to_string(p.investor_type) << '\t'
        << p.sign << '\t' << p.execution_seconds << '\t' << p.trade_count << '\t'
        << p.market_trades << '\t' << p.total_volume << '\t' << text::number(p.market_fraction)
        << '\t' << text::number(p.t_ini) << '\t' << text::number(p.t_fin) << '\t'
        << p.first_time().date.to_string() << '\t' << p.last_time().date.to_string() << '\t'
        << (p.within_one_day ? 1 : 0) << '\n';
  }
}

}  // namespace tradepack
