#include "tradepack/impact.hpp"

#include <cmath>
#include <map>
#include <ostream>

#include "tradepack/ols.hpp"
#include "tradepack/text.hpp"

namespace tradepack {

std::vector<PackageImpact> package_impacts(std::span<const TradePackage> packages,
                                           PackageImpactReport* report) {
  PackageImpactReport rep;
  std::vector<PackageImpact> out;
  std::map<StockCode, std::pair<double, std::size_t>> abs_sum;
  for (std::size_t i = 0; i < packages.size(); ++i) {
    const auto& pkg = packages[i];
    if (!pkg.within_one_day) {
      ++rep.skipped_multi_day;
      continue;
    }
    PackageImpact imp;
    imp.package_index = i;
    imp.stock = pkg.stock;
    imp.investor_type = pkg.investor_type;
    imp.sign = pkg.sign;
    imp.r = std::log(pkg.trades.back().price) - std::log(pkg.trades.front().price);
    imp.market_fraction = pkg.market_fraction;
    imp.execution_seconds = static_cast<double>(pkg.execution_seconds);
    imp.total_volume = static_cast<double>(pkg.total_volume);
    imp.t_ini = pkg.t_ini;
    auto& acc = abs_sum[pkg.stock];
    acc.first += std::abs(imp.r);
    ++acc.second;
    out.push_back(imp);
  }
  std::vector<PackageImpact> kept;
  kept.reserve(out.size());
  for (auto& imp : out) {
    const auto& acc = abs_sum[imp.stock];
    const double scale = acc.first / static_cast<double>(acc.second);
    if (!(scale > 0.0)) {
      ++rep.skipped_zero_scale;
      continue;
    }
    imp.scaled = imp.sign * imp.r / scale;
    kept.push_back(imp);
  }
  rep.used = kept.size();
  if (report != nullptr) *report = rep;
  return kept;
}

std::vector<TransactionImpact> transaction_impacts(std::span<const TradePackage> packages,
                                                   const MarketTape& tape,
                                                   TransactionImpactReport* report) {
  TransactionImpactReport rep;
  std::vector<TransactionImpact> out;
  std::map<StockCode, std::pair<double, std::size_t>> abs_sum;
  for (std::size_t i = 0; i < packages.size(); ++i) {
    const auto& pkg = packages[i];
    if (!pkg.within_one_day) {
      ++rep.skipped_multi_day;
      continue;
    }
    const double mean_volume = tape.mean_volume(pkg.stock);
    for (std::size_t j = 0; j < pkg.trades.size(); ++j) {
      const auto& trade = pkg.trades[j];
      const auto before = tape.price_before(trade.stock, trade.time);
      if (!before) {
        ++rep.missing_prior_price;
        continue;
      }
      TransactionImpact imp;
      imp.package_index = i;
      imp.trade_index = j;
      imp.stock = trade.stock;
      imp.investor_type = trade.investor_type;
      imp.aggressor = trade.aggressor;
      imp.sign = sign_of(trade.side);
      imp.r = std::log(trade.price) - std::log(*before);
      const auto concurrent = concurrent_prints(tape, trade);
      if (!concurrent.empty()) imp.r_concurrent = std::log(concurrent.back().price) - std::log(trade.price);
      imp.t = day_clock::normalize(trade.time.seconds);
      imp.volume = static_cast<double>(trade.volume);
      imp.volume_normalized = imp.volume / mean_volume;
      auto& acc = abs_sum[trade.stock];
      acc.first += std::abs(imp.r);
      ++acc.second;
      out.push_back(imp);
    }
  }
  std::vector<TransactionImpact> kept;
  kept.reserve(out.size());
  for (auto& imp : out) {
    const auto& acc = abs_sum[imp.stock];
    const double scale = acc.first / static_cast<double>(acc.second);
    if (!(scale > 0.0)) {
      ++rep.skipped_zero_scale;
      continue;
    }
    imp.scaled = imp.sign * imp.r / scale;
    imp.scaled_concurrent = imp.sign * imp.r_concurrent / scale;
    kept.push_back(imp);
  }
  rep.used = kept.size();
  if (report != nullptr) *report = rep;
  return kept;
}

bool passes(FmFilter filter, double market_fraction) noexcept {
  switch (filter) {
    case FmFilter::All: return true;
    case FmFilter::Above08: return market_fraction > 0.8;
    case FmFilter::Below02: return market_fraction < 0.2;
  }
  return false;
}

ImpactSample select_impacts(std::span<const PackageImpact> impacts, const ImpactQuery& query) {
  if (query.condition == Condition::TradeVolume) {
    throw Error(ErrorCode::InvalidArgument, "package impact cannot be conditioned on v");
  }
  ImpactSample s;
  for (const auto& imp : impacts) {
    if (!passes(query.fm, imp.market_fraction)) continue;
    if (query.investor_type && imp.investor_type != *query.investor_type) continue;
    double x = 0.0;
    switch (query.condition) {
      case Condition::ExecutionTime: x = imp.execution_seconds; break;
      case Condition::TotalVolume: x = imp.total_volume; break;
      case Condition::DayTime: x = imp.t_ini; break;
      case Condition::TradeVolume: break;
    }
    s.condition.push_back(x);
    s.response.push_back(imp.scaled);
  }
  return s;
}

ImpactSample select_impacts(std::span<const TransactionImpact> impacts, const ImpactQuery& query) {
  if (query.condition != Condition::DayTime && query.condition != Condition::TradeVolume) {
    throw Error(ErrorCode::InvalidArgument, "transaction impact is conditioned on t or v only");
  }
  ImpactSample s;
  for (const auto& imp : impacts) {
    if (query.investor_type && imp.investor_type != *query.investor_type) continue;
    if (query.aggressor && imp.aggressor != *query.aggressor) continue;
    s.condition.push_back(query.condition == Condition::DayTime ? imp.t : imp.volume);
    s.response.push_back(query.concurrent ? imp.scaled_concurrent : imp.scaled);
  }
  return s;
}

BinnedSeries conditional_impact(std::span<const PackageImpact> impacts, const ImpactQuery& query) {
  const auto s = select_impacts(impacts, query);
  return binned_conditional_mean(s.condition, s.response, query.n_bins);
}

BinnedSeries conditional_impact(std::span<const TransactionImpact> impacts,
                                const ImpactQuery& query) {
  const auto s = select_impacts(impacts, query);
  return binned_conditional_mean(s.condition, s.response, query.n_bins);
}

AnovaResult impact_anova(std::span<const PackageImpact> impacts, const ImpactQuery& query) {
  const auto s = select_impacts(impacts, query);
  return anova_oneway(binned_groups(s.condition, s.response, query.n_bins));
}

AnovaResult impact_anova(std::span<const TransactionImpact> impacts, const ImpactQuery& query) {
  const auto s = select_impacts(impacts, query);
  return anova_oneway(binned_groups(s.condition, s.response, query.n_bins));
}

ImpactPowerLaw fit_impact_powerlaw(const BinnedSeries& series, double floor) {
  ImpactPowerLaw out;
  std::vector<std::size_t> above;
  int positive = 0;
  int negative = 0;
  for (std::size_t b = 0; b < series.bins.size(); ++b) {
    const auto& bin = series.bins[b];
    if (!(bin.condition_mean > floor) || !(bin.condition_mean > 0.0)) continue;
    above.push_back(b);
    if (bin.response_mean > 0.0) ++positive;
    if (bin.response_mean < 0.0) ++negative;
  }
  out.dominant_sign = negative > positive ? -1 : 1;

  DesignMatrix x;
  std::vector<double> y;
  for (std::size_t b : above) {
    const auto& bin = series.bins[b];
    if (bin.response_mean * out.dominant_sign <= 0.0) {
      out.excluded.push_back(b);
      continue;
    }
    const double row[2] = {1.0, std::log(bin.condition_mean)};
    x.push_row(row);
    y.push_back(std::log(std::abs(bin.response_mean)));
  }
  if (y.size() < 3) {
    throw Error(ErrorCode::TooFewSamples, "impact power law needs three same-sign bins above the floor");
  }
  const auto fit = ols(x, y);
  out.prefactor = std::exp(fit.coefficients[0]);
  out.prefactor_stderr = out.prefactor * fit.std_errors[0];
  out.exponent = fit.coefficients[1];
  out.exponent_stderr = fit.std_errors[1];
  out.bins_used = y.size();
  return out;
}

void write_package_impacts_tsv(std::ostream& out, std::span<const PackageImpact> impacts) {
  out << "stock\titype\tsign\tr\tR\tF_m\tT\tV\tt_ini\n";
  for (const auto& imp : impacts) {
    out << imp.stock.view() << '\t' << to_string(imp.investor_type) << '\t' << imp.sign << '\t'
        << text::number(imp.r) << '\t' << text::number(imp.scaled) << '\t'
        << text::number(imp.market_fraction) << '\t' << text::number(imp.execution_seconds) << '\t'
        << text::number(imp.total_volume) << '\t' << text::number(imp.t_ini) << '\n';
  }
}

void write_transaction_impacts_tsv(std::ostream& out, std::span<const TransactionImpact> impacts) {
  out << "stock\titype\taggr\tsign\tr_i\tR_i\tr_con\tR_con\tt\tv\tv_norm\n";
  for (const auto& imp : impacts) {
    out << imp.stock.view() << '\t' << to_string(imp.investor_type) << '\t'
        << to_string(imp.aggressor) << '\t' << imp.sign << '\t' << text::number(imp.r) << '\t'
        << text::number(imp.scaled) << '\t' << text::number(imp.r_concurrent) << '\t'
        << text::number(imp.scaled_concurrent) << '\t' << text::number(imp.t) << '\t'
        << text::number(imp.volume) << '\t' << text::number(imp.volume_normalized) << '\n';
  }
}

std::string_view to_string(Condition condition) {
  switch (condition) {
    case Condition::ExecutionTime: return "T";
    case Condition::TotalVolume: return "V";
    case Condition::DayTime: return "t";
    case Condition::TradeVolume: return "v";
  }
  return "?";
}

std::string_view to_string(FmFilter filter) {
  switch (filter) {
    case FmFilter::All: return "all";
    case FmFilter::Above08: return "gt08";
    case FmFilter::Below02: return "lt02";
  }
  return "?";
}

}  // namespace tradepack
