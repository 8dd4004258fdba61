#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tradepack/ingest.hpp"
#include "tradepack/regress.hpp"

namespace tradepack::synth {

/// Package total volume V: bounded power law on [x_min, x_max], or an
/// unbounded tail when x_max <= 0.
struct VolumeLaw {
  double delta = 2.4;
  double x_min = 2.0e4;
  double x_max = 3.0e5;
};

/// N = n_prefactor V^n_exponent e^{n_log_sd z}, T = t_prefactor N^t_exponent
/// e^{t_log_sd z}; N and T are rounded and clamped so that consecutive trades
/// of a package are at least min_gap seconds apart within one trading day.
struct SplitLaw {
  double n_prefactor = 0.00525;
  double n_exponent = 0.74;
  double n_log_sd = 0.15;
  std::int64_t n_min = 8;
  std::int64_t n_max = 200;
  double t_prefactor = 1500.0;
  double t_exponent = 0.18;
  double t_log_sd = 0.15;
  std::int32_t min_gap = 30;
};

struct OrderMix {
  double market_probability = 1.0;  // per trade of an accepted package
  std::int64_t min_market_trades = 5;  // detector threshold the labels assume
  double theta = 0.75;                 // detector threshold the labels assume
};

/// Fractions of planted packages built to fail one detection rule.
struct Decoys {
  double theta_fail = 0.0;
  double few_market = 0.0;
};

/// Latent per-second log return of each stock:
///   r(k) = ar5 r(k-5) + sigma eta(k) + trade jumps + package drift.
/// A trade of volume v whose market-order side has sign d adds
/// sigma * trade_beta[m] * d * ln v at k + 5m. A package of sign s adds
/// s * package_prefactor * V^package_exponent spread evenly over its trades
/// after the first.
struct ImpactLaw {
  double sigma = 5.0e-5;
  double package_prefactor = 0.0;
  double package_exponent = 0.447;
  std::vector<double> trade_beta;
  double ar5 = 0.0;
};

/// Trade-volume weight 1 + open_boost e^{-t/width} + close_boost e^{-(1-t)/width}.
struct ProfileShape {
  double open_boost = 0.0;
  double close_boost = 0.0;
  double width = 0.05;
};

/// Non-package flow. Each background print is a noise trader's market order
/// against the stock's market maker. Noise traders never exceed five trades
/// and the market maker only posts limit orders, so neither forms a package.
struct Background {
  bool enabled = false;
  double print_probability = 0.02;  // per stock and second
  bool counterparties = true;       // give every package trade its other side
};

struct SynthConfig {
  std::uint64_t seed = 1;
  int n_stocks = 5;
  int trading_days = 20;
  std::string start_date = "2003-01-06";
  int packages_per_stock = 100;
  double institution_share = 0.5;
  int investors_per_type = 40;
  int separation_days = 10;  // min trading-day gap between packages of one (investor, stock)
  double initial_price = 50.0;
  VolumeLaw volume;
  SplitLaw split;
  OrderMix orders;
  Decoys decoys;
  ImpactLaw impact;
  ProfileShape profile;
  Background background;

  /// Throws InvalidArgument or InfeasibleConfig.
  void validate() const;
};

SynthConfig config_from_json(std::string_view json);
std::string config_to_json(const SynthConfig& config);

enum class PlantedLabel { Accepted, ThetaFail, FewMarket };

struct PlantedPackage {
  StockCode stock;
  std::uint64_t investor = 0;
  InvestorType investor_type = InvestorType::Individual;
  int sign = 1;
  PlantedLabel label = PlantedLabel::Accepted;
  Timestamp first;
  Timestamp last;
  std::int64_t trade_count = 0;
  std::int64_t market_trades = 0;
  std::int64_t total_volume = 0;
  std::int64_t execution_seconds = 0;

  bool operator==(const PlantedPackage&) const = default;
};

struct GroundTruth {
  std::uint64_t seed = 0;
  double delta_v = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;
  double package_prefactor = 0.0;
  double package_exponent = 0.0;
  std::vector<double> trade_beta;
  double ar5 = 0.0;
  double sigma = 0.0;
  std::vector<PlantedPackage> packages;         // ordered by (stock, investor, first)
  std::map<std::string, double> mean_volume;    // per stock; filled by generate_market only

  std::size_t accepted_count() const;
  bool operator==(const GroundTruth&) const = default;
};

std::string truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(std::string_view json);

struct Market {
  std::vector<TradeRecord> records;  // ordered by (date, time, stock, investor, side, aggressor)
  GroundTruth truth;
};

/// Deterministic per (config, seed); stocks run on up to `jobs` threads with
/// independent derived seeds.
Market generate_market(const SynthConfig& config, int jobs = 1);

/// The planted packages and laws without prices or background flow.
GroundTruth planted_truth(const SynthConfig& config);

/// A bare return grid: iid standard-normal returns plus sum_m beta[m] x(t-5m),
/// with package events of random sign and log-normal volume at rate
/// event_probability per second. Session starts carry zero return.
struct NoiseGridConfig {
  std::uint64_t seed = 1;
  int days = 5;
  double event_probability = 0.01;
  std::vector<double> beta;
};

SecondGrid noise_grid(const NoiseGridConfig& config);

std::string_view to_string(PlantedLabel label);

}  // namespace tradepack::synth
