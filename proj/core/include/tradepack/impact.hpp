#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tradepack/anova.hpp"
#include "tradepack/binning.hpp"
#include "tradepack/detect.hpp"
#include "tradepack/tape.hpp"

namespace tradepack {

struct PackageImpact {
  std::size_t package_index = 0;  // position in the input span
  StockCode stock;
  InvestorType investor_type = InvestorType::Individual;
  int sign = 1;
  double r = 0.0;                 // ln p(last) - ln p(first)
  double scaled = 0.0;            // R = s r / <|r|>_stock
  double market_fraction = 0.0;   // F_m
  double execution_seconds = 0.0; // T
  double total_volume = 0.0;      // V
  double t_ini = 0.0;
};

struct PackageImpactReport {
  std::size_t used = 0;
  std::size_t skipped_multi_day = 0;
  std::size_t skipped_zero_scale = 0;  // packages of stocks whose <|r|> is 0
};

/// Impacts of the within-one-day packages. <|r|> is taken per stock over those
/// packages with both investor types pooled.
std::vector<PackageImpact> package_impacts(std::span<const TradePackage> packages,
                                           PackageImpactReport* report = nullptr);

struct TransactionImpact {
  std::size_t package_index = 0;
  std::size_t trade_index = 0;    // position inside the package
  StockCode stock;
  InvestorType investor_type = InvestorType::Individual;
  Aggressor aggressor = Aggressor::MarketOrder;
  int sign = 1;                   // s_i, the transaction's own side
  double r = 0.0;                 // ln p(t) - ln p(t-)
  double scaled = 0.0;            // R_i
  double r_concurrent = 0.0;      // ln p(last concurrent print) - ln p(t); 0 without one
  double scaled_concurrent = 0.0; // R_con, same s_i and <|r_i|> as R_i
  double t = 0.0;                 // normalized day-time
  double volume = 0.0;            // shares
  double volume_normalized = 0.0; // shares / stock mean print volume
};

struct TransactionImpactReport {
  std::size_t used = 0;
  std::size_t missing_prior_price = 0;
  std::size_t skipped_multi_day = 0;
  std::size_t skipped_zero_scale = 0;
};

/// Impacts of every transaction of the within-one-day packages. p(t-) is the
/// last print strictly before the transaction's second on the same day;
/// transactions without one are dropped and counted.
std::vector<TransactionImpact> transaction_impacts(std::span<const TradePackage> packages,
                                                   const MarketTape& tape,
                                                   TransactionImpactReport* report = nullptr);

enum class Condition { ExecutionTime, TotalVolume, DayTime, TradeVolume };
enum class FmFilter { All, Above08, Below02 };

struct ImpactQuery {
  Condition condition = Condition::TotalVolume;
  FmFilter fm = FmFilter::All;                     // package level only
  std::optional<InvestorType> investor_type;
  std::optional<Aggressor> aggressor;              // transaction level only
  bool concurrent = false;                         // transaction level: R_con instead of R_i
  std::size_t n_bins = 20;
};

/// Condition values and responses after filtering. Package level accepts
/// T, V and t (first trade); transaction level accepts t and v (shares).
struct ImpactSample {
  std::vector<double> condition;
  std::vector<double> response;
};

ImpactSample select_impacts(std::span<const PackageImpact> impacts, const ImpactQuery& query);
ImpactSample select_impacts(std::span<const TransactionImpact> impacts, const ImpactQuery& query);

bool passes(FmFilter filter, double market_fraction) noexcept;

/// Equal-count binned mean response; throws TooFewSamples below n_bins items.
BinnedSeries conditional_impact(std::span<const PackageImpact> impacts, const ImpactQuery& query);
BinnedSeries conditional_impact(std::span<const TransactionImpact> impacts,
                                const ImpactQuery& query);

/// One-way ANOVA of the response across the same bins.
AnovaResult impact_anova(std::span<const PackageImpact> impacts, const ImpactQuery& query);
AnovaResult impact_anova(std::span<const TransactionImpact> impacts, const ImpactQuery& query);

struct ImpactPowerLaw {
  double prefactor = 0.0;          // A or B
  double prefactor_stderr = 0.0;   // delta-method from the log intercept
  double exponent = 0.0;           // gamma or k
  double exponent_stderr = 0.0;
  int dominant_sign = 1;
  std::size_t bins_used = 0;
  std::vector<std::size_t> excluded;  // zero or minority-sign bins above the floor
};

/// OLS of ln|<R|x>| on ln x over bins whose condition mean exceeds `floor`.
/// Bins with a zero mean or a sign against the majority are excluded and
/// listed. Throws TooFewSamples with fewer than three usable bins.
ImpactPowerLaw fit_impact_powerlaw(const BinnedSeries& series, double floor = 0.0);

void write_package_impacts_tsv(std::ostream& out, std::span<const PackageImpact> impacts);
void write_transaction_impacts_tsv(std::ostream& out, std::span<const TransactionImpact> impacts);

std::string_view to_string(Condition condition);
std::string_view to_string(FmFilter filter);

}  // namespace tradepack
