#include "tradepack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <random>
#include <tuple>

#include "json.hpp"
#include "tradepack/parallel.hpp"
#include "tradepack/powerlaw.hpp"

namespace tradepack::synth {

namespace D = day_clock;
using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(stream * 0x100000001B3ULL + index));
}

// Explicit transforms over mt19937_64 so draws do not depend on the standard
// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return powerlaw::unit_interval(engine_()); }
  double exponential() { return -std::log(uniform()); }
  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t below(std::uint64_t n) {
    const auto k = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
    return std::min(k, n - 1);
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::int32_t wall_clock(std::int32_t offset) {
  return offset < D::kHalfDay ? D::kMorningOpen + offset : D::kAfternoonOpen + (offset - D::kHalfDay);
}

std::vector<Date> trading_days(const SynthConfig& c) {
  std::vector<Date> days;
  Date d = Date::parse(c.start_date);
  while (static_cast<int>(days.size()) < c.trading_days) {
    if (d.weekday() < 5) days.push_back(d);
    ++d.days;
  }
  return days;
}

StockCode stock_code(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%06d", index + 1);
  return StockCode(buf);
}

// Splits `total` into parts proportional to `weights` whose sum is exact.
std::vector<std::int64_t> partition(std::int64_t total, const std::vector<double>& weights) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  std::vector<std::int64_t> out(weights.size());
  double cum = 0.0;
  std::int64_t prev = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cum += weights[i];
    const std::int64_t upto =
        i + 1 == weights.size() ? total : std::llround(static_cast<double>(total) * cum / sum);
    out[i] = upto - prev;
    prev = upto;
  }
  return out;
}

struct PlannedTrade {
  std::int32_t offset = 0;
  Side side = Side::Buy;
  Aggressor aggressor = Aggressor::MarketOrder;
  std::int64_t volume = 0;
};

struct PlannedPackage {
  PlantedPackage truth;
  int day = 0;
  double drift = 0.0;  // total planted log-price drift, signed
  std::vector<PlannedTrade> trades;
};

powerlaw::PowerLawFit volume_law(const VolumeLaw& v) {
  return v.x_max > 0.0 ? powerlaw::make_bounded(v.delta, v.x_min, v.x_max)
                       : powerlaw::make_unbounded(v.delta, v.x_min);
}

std::vector<PlannedPackage> plan_stock(const SynthConfig& c, int stock, const std::vector<Date>& days) {
  Rng rng(derive_seed(c.seed, 1, static_cast<std::uint64_t>(stock)));
  const auto law = volume_law(c.volume);
  const auto& s = c.split;
  const StockCode code = stock_code(stock);
  std::map<std::pair<int, std::uint64_t>, std::vector<int>> busy;  // (type, slot) -> days

  std::vector<PlannedPackage> out;
  out.reserve(static_cast<std::size_t>(c.packages_per_stock));
  for (int p = 0; p < c.packages_per_stock; ++p) {
    PlannedPackage pk;
    auto& t = pk.truth;
    t.stock = code;

    const double label_u = rng.uniform();
    t.label = label_u < c.decoys.theta_fail ? PlantedLabel::ThetaFail
              : label_u < c.decoys.theta_fail + c.decoys.few_market ? PlantedLabel::FewMarket
                                                                    : PlantedLabel::Accepted;
    t.investor_type = rng.bernoulli(c.institution_share) ? InvestorType::Institution
                                                         : InvestorType::Individual;
    t.sign = rng.bernoulli(0.5) ? 1 : -1;

    const double v = powerlaw::quantile(law, rng.uniform());
    t.total_volume = std::max<std::int64_t>(std::llround(v), 1);
    const double n_star = s.n_prefactor * std::pow(static_cast<double>(t.total_volume), s.n_exponent) *
                          std::exp(s.n_log_sd * rng.normal());
    const std::int64_t n = std::clamp<std::int64_t>(std::llround(n_star), s.n_min, s.n_max);
    const double t_star = s.t_prefactor * std::pow(static_cast<double>(n), s.t_exponent) *
                          std::exp(s.t_log_sd * rng.normal());
    const std::int64_t span_floor = static_cast<std::int64_t>(s.min_gap) * (n - 1);
    const std::int64_t span =
        std::clamp<std::int64_t>(std::llround(t_star), span_floor, D::kDaySeconds - 1);
    if (t.total_volume < n) {
      throw Error(ErrorCode::InfeasibleConfig, "package volume below its trade count");
    }
    t.trade_count = n;
    t.execution_seconds = span;

    pk.day = static_cast<int>(rng.below(days.size()));
    const auto start = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(D::kDaySeconds - span)));

    std::vector<double> gap_w(static_cast<std::size_t>(n - 1));
    for (double& w : gap_w) w = rng.exponential();
    const auto extra = n > 1 ? partition(span - span_floor, gap_w) : std::vector<std::int64_t>{};
    pk.trades.resize(static_cast<std::size_t>(n));
    pk.trades[0].offset = start;
    for (std::size_t i = 1; i < pk.trades.size(); ++i) {
      pk.trades[i].offset =
          pk.trades[i - 1].offset + s.min_gap + static_cast<std::int32_t>(extra[i - 1]);
    }

    std::vector<double> vol_w(pk.trades.size(), 1.0);
    for (std::size_t i = 0; i < pk.trades.size(); ++i) {
      const double tt = static_cast<double>(pk.trades[i].offset) / D::kDaySeconds;
      const double boost = 1.0 + c.profile.open_boost * std::exp(-tt / c.profile.width) +
                           c.profile.close_boost * std::exp(-(1.0 - tt) / c.profile.width);
      const double w = rng.exponential() * boost;
      if (t.label != PlantedLabel::ThetaFail) vol_w[i] = w;
    }
    const auto parts = partition(t.total_volume - n, vol_w);
    for (std::size_t i = 0; i < pk.trades.size(); ++i) pk.trades[i].volume = 1 + parts[i];

    const Side own = t.sign > 0 ? Side::Buy : Side::Sell;
    const Side other = t.sign > 0 ? Side::Sell : Side::Buy;
    std::vector<std::size_t> order(pk.trades.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    const auto floor_m = static_cast<std::size_t>(c.orders.min_market_trades + 1);
    switch (t.label) {
      case PlantedLabel::Accepted: {
        std::size_t market = 0;
        for (auto& tr : pk.trades) {
          tr.side = own;
          tr.aggressor = rng.bernoulli(c.orders.market_probability) ? Aggressor::MarketOrder
                                                                    : Aggressor::LimitOrder;
          market += tr.aggressor == Aggressor::MarketOrder;
        }
        for (std::size_t k = 0; market < floor_m; ++k) {
          auto& tr = pk.trades[order[k]];
          if (tr.aggressor == Aggressor::LimitOrder) {
            tr.aggressor = Aggressor::MarketOrder;
            ++market;
          }
        }
        break;
      }
      case PlantedLabel::FewMarket:
        for (std::size_t k = 0; k < order.size(); ++k) {
          auto& tr = pk.trades[order[k]];
          tr.side = own;
          tr.aggressor = k + 1 < floor_m ? Aggressor::MarketOrder : Aggressor::LimitOrder;
        }
        break;
      case PlantedLabel::ThetaFail:
        for (std::size_t i = 0; i < pk.trades.size(); ++i) {
          pk.trades[i].side = i % 2 == 0 ? own : other;
          pk.trades[i].aggressor = Aggressor::MarketOrder;
        }
        break;
    }
    t.market_trades = static_cast<std::int64_t>(
        std::count_if(pk.trades.begin(), pk.trades.end(),
                      [](const PlannedTrade& tr) { return tr.aggressor == Aggressor::MarketOrder; }));

    // Investor whose other packages in this stock are far enough away in time.
    const int type_key = t.investor_type == InvestorType::Institution ? 0 : 1;
    const auto pool = static_cast<std::uint64_t>(c.investors_per_type);
    const std::uint64_t first = rng.below(pool);
    for (std::uint64_t j = 0;; ++j) {
      const std::uint64_t slot = j < pool ? (first + j) % pool : j;
      auto& taken = busy[{type_key, slot}];
      const bool free = std::all_of(taken.begin(), taken.end(),
                                    [&](int d) { return std::abs(d - pk.day) >= c.separation_days; });
      if (!free) continue;
      taken.push_back(pk.day);
      t.investor = (type_key == 0 ? 1'000'000ULL : 2'000'000ULL) + slot;
      break;
    }

    const Date date = days[static_cast<std::size_t>(pk.day)];
    t.first = {date, wall_clock(pk.trades.front().offset)};
    t.last = {date, wall_clock(pk.trades.back().offset)};
    pk.drift = t.sign * c.impact.package_prefactor *
               std::pow(static_cast<double>(t.total_volume), c.impact.package_exponent);
    out.push_back(std::move(pk));
  }
  return out;
}

std::vector<std::vector<PlannedPackage>> plan(const SynthConfig& c, const std::vector<Date>& days,
                                              int jobs) {
  std::vector<std::vector<PlannedPackage>> out(static_cast<std::size_t>(c.n_stocks));
  parallel_for(out.size(), jobs, [&](std::size_t s) { out[s] = plan_stock(c, static_cast<int>(s), days); });
  return out;
}

GroundTruth truth_skeleton(const SynthConfig& c, const std::vector<std::vector<PlannedPackage>>& plans) {
  GroundTruth t;
  t.seed = c.seed;
  t.delta_v = c.volume.delta;
  t.g2 = c.split.n_exponent;
  t.g3 = c.split.t_exponent;
  t.package_prefactor = c.impact.package_prefactor;
  t.package_exponent = c.impact.package_exponent;
  t.trade_beta = c.impact.trade_beta;
  t.ar5 = c.impact.ar5;
  t.sigma = c.impact.sigma;
  for (const auto& stock : plans) {
    for (const auto& pk : stock) t.packages.push_back(pk.truth);
  }
  std::sort(t.packages.begin(), t.packages.end(), [](const PlantedPackage& a, const PlantedPackage& b) {
    return std::tie(a.stock, a.investor, a.first) < std::tie(b.stock, b.investor, b.first);
  });
  return t;
}

class NoiseTraders {
 public:
  NoiseTraders(int stock) : base_(100'000'000ULL + static_cast<std::uint64_t>(stock) * 10'000'000ULL) {}

  std::uint64_t next() {
    if (used_ == 5) {
      ++index_;
      used_ = 0;
    }
    ++used_;
    return base_ + index_;
  }

 private:
  std::uint64_t base_;
  std::uint64_t index_ = 0;
  int used_ = 0;
};

std::vector<TradeRecord> simulate_stock(const SynthConfig& c, int stock, const std::vector<Date>& days,
                                        const std::vector<PlannedPackage>& packages) {
  Rng rng(derive_seed(c.seed, 2, static_cast<std::uint64_t>(stock)));
  const StockCode code = stock_code(stock);
  const std::uint64_t maker = 90'000'000ULL + static_cast<std::uint64_t>(stock);
  NoiseTraders noise(stock);
  const auto& imp = c.impact;

  struct Pending {
    std::int32_t offset;
    const PlannedPackage* pkg;
    const PlannedTrade* trade;
  };
  std::vector<std::vector<Pending>> by_day(days.size());
  for (const auto& pk : packages) {
    for (const auto& tr : pk.trades) by_day[static_cast<std::size_t>(pk.day)].push_back({tr.offset, &pk, &tr});
  }

  std::vector<TradeRecord> out;
  double log_p = std::log(c.initial_price);
  std::vector<double> jumps(D::kDaySeconds);
  std::vector<double> r(D::kDaySeconds);
  for (std::size_t d = 0; d < days.size(); ++d) {
    auto& events = by_day[d];
    // A day that cannot print only moves the latent price: one draw for the
    // whole day's diffusion (two session opens carry no noise).
    if (events.empty() && !c.background.enabled && imp.ar5 == 0.0) {
      log_p += imp.sigma * std::sqrt(static_cast<double>(D::kDaySeconds - 2)) * rng.normal();
      continue;
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const Pending& a, const Pending& b) { return a.offset < b.offset; });
    std::fill(jumps.begin(), jumps.end(), 0.0);
    for (const auto& e : events) {
      const int own = sign_of(e.trade->side);
      const int dir = e.trade->aggressor == Aggressor::MarketOrder ? own : -own;
      const double lnv = std::log(static_cast<double>(e.trade->volume));
      for (std::size_t m = 0; m < imp.trade_beta.size(); ++m) {
        const std::int32_t k = e.offset + static_cast<std::int32_t>(5 * m);
        if (k >= D::kDaySeconds || D::session_start(k) != D::session_start(e.offset)) break;
        jumps[static_cast<std::size_t>(k)] += imp.sigma * imp.trade_beta[m] * dir * lnv;
      }
      if (e.trade != &e.pkg->trades.front()) {
        jumps[static_cast<std::size_t>(e.offset)] +=
            e.pkg->drift / static_cast<double>(e.pkg->trades.size() - 1);
      }
    }

    std::size_t next = 0;
    for (std::int32_t k = 0; k < D::kDaySeconds; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const double eta = rng.normal();
      const std::int32_t start = D::session_start(k);
      if (k == start) {
        r[ku] = jumps[ku];
      } else {
        const double ar = k - 5 >= start ? imp.ar5 * r[ku - 5] : 0.0;
        r[ku] = ar + imp.sigma * eta + jumps[ku];
      }
      log_p += r[ku];
      const bool background = c.background.enabled && rng.bernoulli(c.background.print_probability);
      const bool package_here = next < events.size() && events[next].offset == k;
      if (!background && !package_here) continue;

      const std::int64_t ticks = std::max<std::int64_t>(std::llround(std::exp(log_p) * 1000.0), 1);
      const double price = static_cast<double>(ticks) / 1000.0;
      const Timestamp when{days[d], wall_clock(k)};
      auto emit = [&](std::uint64_t investor, InvestorType type, Side side, Aggressor aggr,
                      std::int64_t volume) {
        out.push_back({code, investor, type, when, side, aggr, price, volume});
      };
      const auto opposite = [](Side s) { return s == Side::Buy ? Side::Sell : Side::Buy; };

      for (; next < events.size() && events[next].offset == k; ++next) {
        const auto& e = events[next];
        const auto& tr = *e.trade;
        emit(e.pkg->truth.investor, e.pkg->truth.investor_type, tr.side, tr.aggressor, tr.volume);
        if (c.background.enabled && c.background.counterparties) {
          if (tr.aggressor == Aggressor::MarketOrder) {
            emit(maker, InvestorType::Institution, opposite(tr.side), Aggressor::LimitOrder, tr.volume);
          } else {
            emit(noise.next(), InvestorType::Individual, opposite(tr.side), Aggressor::MarketOrder,
                 tr.volume);
          }
        }
      }
      if (background) {
        const Side side = rng.bernoulli(0.5) ? Side::Buy : Side::Sell;
        const auto volume = static_cast<std::int64_t>(100 * (1 + rng.below(20)));
        emit(noise.next(), InvestorType::Individual, side, Aggressor::MarketOrder, volume);
        emit(maker, InvestorType::Institution, opposite(side), Aggressor::LimitOrder, volume);
      }
    }
  }
  return out;
}

// JSON helpers.

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, std::string(where) + " must be an object");
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) {
      throw Error(ErrorCode::InvalidArgument, "unknown key '" + item.key() + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json timestamp_json(const Timestamp& t) {
  return json{{"date", t.date.to_string()}, {"time", format_clock(t.seconds)}};
}

Timestamp timestamp_from(const json& j) {
  return {Date::parse(j.at("date").get<std::string>()), parse_clock(j.at("time").get<std::string>())};
}

PlantedLabel label_from(const std::string& s) {
  if (s == "accepted") return PlantedLabel::Accepted;
  if (s == "theta_fail") return PlantedLabel::ThetaFail;
  if (s == "few_market") return PlantedLabel::FewMarket;
  throw Error(ErrorCode::InvalidArgument, "unknown package label '" + s + "'");
}

template <typename Fn>
auto wrap_json(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("json: ") + e.what());
  }
}

}  // namespace

void SynthConfig::validate() const {
  const auto invalid = [](const std::string& m) { throw Error(ErrorCode::InvalidArgument, m); };
  const auto infeasible = [](const std::string& m) { throw Error(ErrorCode::InfeasibleConfig, m); };
  if (n_stocks < 1 || n_stocks > 999'999) invalid("n_stocks must lie in [1, 999999]");
  if (trading_days < 1) invalid("trading_days must be positive");
  if (packages_per_stock < 0) invalid("packages_per_stock must be non-negative");
  if (investors_per_type < 1) invalid("investors_per_type must be positive");
  if (separation_days < 1) invalid("separation_days must be positive");
  if (!(institution_share >= 0.0 && institution_share <= 1.0)) invalid("institution_share must lie in [0, 1]");
  if (!(initial_price > 0.0)) invalid("initial_price must be positive");
  (void)Date::parse(start_date);
  if (!(volume.x_min > 0.0)) invalid("volume.x_min must be positive");
  if (volume.x_max > 0.0 && !(volume.x_max > volume.x_min)) invalid("volume.x_max must exceed x_min");
  if (volume.x_max <= 0.0 && !(volume.delta > 1.0)) invalid("an unbounded volume law needs delta > 1");
  if (split.n_min < 1 || split.n_max < split.n_min) invalid("split needs 1 <= n_min <= n_max");
  if (split.min_gap < 1) invalid("split.min_gap must be positive");
  if (!(split.n_prefactor > 0.0) || !(split.t_prefactor > 0.0)) invalid("split prefactors must be positive");
  if (split.n_log_sd < 0.0 || split.t_log_sd < 0.0) invalid("split log sds must be non-negative");
  if (static_cast<std::int64_t>(split.min_gap) * (split.n_max - 1) > D::kDaySeconds - 1) {
    infeasible("n_max trades at min_gap spacing do not fit in one trading day");
  }
  if (!(orders.market_probability >= 0.0 && orders.market_probability <= 1.0)) {
    invalid("orders.market_probability must lie in [0, 1]");
  }
  if (orders.min_market_trades < 0) invalid("orders.min_market_trades must be non-negative");
  if (split.n_min <= orders.min_market_trades) {
    infeasible("n_min must exceed min_market_trades so accepted packages can pass rule iii");
  }
  if (decoys.theta_fail < 0.0 || decoys.few_market < 0.0 || decoys.theta_fail + decoys.few_market > 1.0) {
    invalid("decoy fractions must be non-negative and sum to at most 1");
  }
  const double worst_split = static_cast<double>(split.n_min + 1) / static_cast<double>(2 * split.n_min) + 0.01;
  if (decoys.theta_fail > 0.0 && !(worst_split < orders.theta)) {
    infeasible("theta-fail decoys with n_min trades cannot stay below theta");
  }
  if (!(impact.sigma >= 0.0)) invalid("impact.sigma must be non-negative");
  if (!(profile.width > 0.0)) invalid("profile.width must be positive");
  if (!(background.print_probability >= 0.0 && background.print_probability <= 1.0)) {
    invalid("background.print_probability must lie in [0, 1]");
  }
}

SynthConfig config_from_json(std::string_view text) {
  return wrap_json([&] {
    const json j = json::parse(text);
    check_keys(j,
               {"seed", "n_stocks", "trading_days", "start_date", "packages_per_stock",
                "institution_share", "investors_per_type", "separation_days", "initial_price",
                "volume", "split", "orders", "decoys", "impact", "profile", "background"},
               "synth config");
    SynthConfig c;
    read(j, "seed", c.seed);
    read(j, "n_stocks", c.n_stocks);
    read(j, "trading_days", c.trading_days);
    read(j, "start_date", c.start_date);
    read(j, "packages_per_stock", c.packages_per_stock);
    read(j, "institution_share", c.institution_share);
    read(j, "investors_per_type", c.investors_per_type);
    read(j, "separation_days", c.separation_days);
    read(j, "initial_price", c.initial_price);
    if (j.contains("volume")) {
      const auto& v = j["volume"];
      check_keys(v, {"delta", "x_min", "x_max"}, "volume");
      read(v, "delta", c.volume.delta);
      read(v, "x_min", c.volume.x_min);
      read(v, "x_max", c.volume.x_max);
    }
    if (j.contains("split")) {
      const auto& s = j["split"];
      check_keys(s,
                 {"n_prefactor", "n_exponent", "n_log_sd", "n_min", "n_max", "t_prefactor",
                  "t_exponent", "t_log_sd", "min_gap"},
                 "split");
      read(s, "n_prefactor", c.split.n_prefactor);
      read(s, "n_exponent", c.split.n_exponent);
      read(s, "n_log_sd", c.split.n_log_sd);
      read(s, "n_min", c.split.n_min);
      read(s, "n_max", c.split.n_max);
      read(s, "t_prefactor", c.split.t_prefactor);
      read(s, "t_exponent", c.split.t_exponent);
      read(s, "t_log_sd", c.split.t_log_sd);
      read(s, "min_gap", c.split.min_gap);
    }
    if (j.contains("orders")) {
      const auto& o = j["orders"];
      check_keys(o, {"market_probability", "min_market_trades", "theta"}, "orders");
      read(o, "market_probability", c.orders.market_probability);
      read(o, "min_market_trades", c.orders.min_market_trades);
      read(o, "theta", c.orders.theta);
    }
    if (j.contains("decoys")) {
      const auto& d = j["decoys"];
      check_keys(d, {"theta_fail", "few_market"}, "decoys");
      read(d, "theta_fail", c.decoys.theta_fail);
      read(d, "few_market", c.decoys.few_market);
    }
    if (j.contains("impact")) {
      const auto& i = j["impact"];
      check_keys(i, {"sigma", "package_prefactor", "package_exponent", "trade_beta", "ar5"}, "impact");
      read(i, "sigma", c.impact.sigma);
      read(i, "package_prefactor", c.impact.package_prefactor);
      read(i, "package_exponent", c.impact.package_exponent);
      read(i, "trade_beta", c.impact.trade_beta);
      read(i, "ar5", c.impact.ar5);
    }
    if (j.contains("profile")) {
      const auto& p = j["profile"];
      check_keys(p, {"open_boost", "close_boost", "width"}, "profile");
      read(p, "open_boost", c.profile.open_boost);
      read(p, "close_boost", c.profile.close_boost);
      read(p, "width", c.profile.width);
    }
    if (j.contains("background")) {
      const auto& b = j["background"];
      check_keys(b, {"enabled", "print_probability", "counterparties"}, "background");
      read(b, "enabled", c.background.enabled);
      read(b, "print_probability", c.background.print_probability);
      read(b, "counterparties", c.background.counterparties);
    }
    c.validate();
    return c;
  });
}

std::string config_to_json(const SynthConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["n_stocks"] = c.n_stocks;
  j["trading_days"] = c.trading_days;
  j["start_date"] = c.start_date;
  j["packages_per_stock"] = c.packages_per_stock;
  j["institution_share"] = c.institution_share;
  j["investors_per_type"] = c.investors_per_type;
  j["separation_days"] = c.separation_days;
  j["initial_price"] = c.initial_price;
  j["volume"] = {{"delta", c.volume.delta}, {"x_min", c.volume.x_min}, {"x_max", c.volume.x_max}};
  j["split"] = {{"n_prefactor", c.split.n_prefactor}, {"n_exponent", c.split.n_exponent},
                {"n_log_sd", c.split.n_log_sd},       {"n_min", c.split.n_min},
                {"n_max", c.split.n_max},             {"t_prefactor", c.split.t_prefactor},
                {"t_exponent", c.split.t_exponent},   {"t_log_sd", c.split.t_log_sd},
                {"min_gap", c.split.min_gap}};
  j["orders"] = {{"market_probability", c.orders.market_probability},
                 {"min_market_trades", c.orders.min_market_trades},
                 {"theta", c.orders.theta}};
  j["decoys"] = {{"theta_fail", c.decoys.theta_fail}, {"few_market", c.decoys.few_market}};
  j["impact"] = {{"sigma", c.impact.sigma},
                 {"package_prefactor", c.impact.package_prefactor},
                 {"package_exponent", c.impact.package_exponent},
                 {"trade_beta", c.impact.trade_beta},
                 {"ar5", c.impact.ar5}};
  j["profile"] = {{"open_boost", c.profile.open_boost},
                  {"close_boost", c.profile.close_boost},
                  {"width", c.profile.width}};
  j["background"] = {{"enabled", c.background.enabled},
                     {"print_probability", c.background.print_probability},
                     {"counterparties", c.background.counterparties}};
  return j.dump(2) + "\n";
}

std::size_t GroundTruth::accepted_count() const {
  return static_cast<std::size_t>(std::count_if(packages.begin(), packages.end(), [](const PlantedPackage& p) {
    return p.label == PlantedLabel::Accepted;
  }));
}

std::string truth_to_json(const GroundTruth& t) {
  json j;
  j["seed"] = t.seed;
  j["delta_v"] = t.delta_v;
  j["g2"] = t.g2;
  j["g3"] = t.g3;
  j["package_prefactor"] = t.package_prefactor;
  j["package_exponent"] = t.package_exponent;
  j["trade_beta"] = t.trade_beta;
  j["ar5"] = t.ar5;
  j["sigma"] = t.sigma;
  j["mean_volume"] = t.mean_volume;
  json pkgs = json::array();
  for (const auto& p : t.packages) {
    pkgs.push_back({{"stock", p.stock.str()},
                    {"investor", p.investor},
                    {"itype", std::string(to_string(p.investor_type))},
                    {"sign", p.sign},
                    {"label", std::string(to_string(p.label))},
                    {"first", timestamp_json(p.first)},
                    {"last", timestamp_json(p.last)},
                    {"N", p.trade_count},
                    {"N_m", p.market_trades},
                    {"V", p.total_volume},
                    {"T", p.execution_seconds}});
  }
  j["packages"] = std::move(pkgs);
  return j.dump(1) + "\n";
}

GroundTruth truth_from_json(std::string_view text) {
  return wrap_json([&] {
    const json j = json::parse(text);
    GroundTruth t;
    t.seed = j.at("seed").get<std::uint64_t>();
    t.delta_v = j.at("delta_v").get<double>();
    t.g2 = j.at("g2").get<double>();
    t.g3 = j.at("g3").get<double>();
    t.package_prefactor = j.at("package_prefactor").get<double>();
    t.package_exponent = j.at("package_exponent").get<double>();
    t.trade_beta = j.at("trade_beta").get<std::vector<double>>();
    t.ar5 = j.at("ar5").get<double>();
    t.sigma = j.at("sigma").get<double>();
    t.mean_volume = j.at("mean_volume").get<std::map<std::string, double>>();
    for (const auto& p : j.at("packages")) {
      PlantedPackage q;
      q.stock = StockCode(p.at("stock").get<std::string>());
      q.investor = p.at("investor").get<std::uint64_t>();
      const auto itype = p.at("itype").get<std::string>();
      if (itype != "I" && itype != "P") throw Error(ErrorCode::InvalidArgument, "bad itype " + itype);
      q.investor_type = itype == "I" ? InvestorType::Institution : InvestorType::Individual;
      q.sign = p.at("sign").get<int>();
      q.label = label_from(p.at("label").get<std::string>());
      q.first = timestamp_from(p.at("first"));
      q.last = timestamp_from(p.at("last"));
      q.trade_count = p.at("N").get<std::int64_t>();
      q.market_trades = p.at("N_m").get<std::int64_t>();
      q.total_volume = p.at("V").get<std::int64_t>();
      q.execution_seconds = p.at("T").get<std::int64_t>();
      t.packages.push_back(q);
    }
    return t;
  });
}

Market generate_market(const SynthConfig& config, int jobs) {
  config.validate();
  const auto days = trading_days(config);
  const auto plans = plan(config, days, jobs);
  Market m;
  m.truth = truth_skeleton(config, plans);

  std::vector<std::vector<TradeRecord>> per_stock(plans.size());
  parallel_for(plans.size(), jobs, [&](std::size_t s) {
    per_stock[s] = simulate_stock(config, static_cast<int>(s), days, plans[s]);
  });
  for (std::size_t s = 0; s < per_stock.size(); ++s) {
    if (per_stock[s].empty()) continue;
    long double total = 0.0L;
    for (const auto& r : per_stock[s]) total += static_cast<long double>(r.volume);
    m.truth.mean_volume[stock_code(static_cast<int>(s)).str()] =
        static_cast<double>(total / static_cast<long double>(per_stock[s].size()));
    m.records.insert(m.records.end(), per_stock[s].begin(), per_stock[s].end());
  }
  std::stable_sort(m.records.begin(), m.records.end(), [](const TradeRecord& a, const TradeRecord& b) {
    return std::tie(a.time, a.stock, a.investor, a.side, a.aggressor) <
           std::tie(b.time, b.stock, b.investor, b.side, b.aggressor);
  });
  return m;
}

GroundTruth planted_truth(const SynthConfig& config) {
  config.validate();
  const auto days = trading_days(config);
  return truth_skeleton(config, plan(config, days, 1));
}

SecondGrid noise_grid(const NoiseGridConfig& config) {
  if (config.days < 1) throw Error(ErrorCode::InvalidArgument, "noise grid needs at least one day");
  Rng rng(derive_seed(config.seed, 3, 0));
  SecondGrid g;
  g.stock = StockCode("000000");
  Date d = Date::from_ymd(2003, 1, 6);
  while (static_cast<int>(g.days.size()) < config.days) {
    if (d.weekday() < 5) g.days.push_back(d);
    ++d.days;
  }
  const std::size_t n = g.days.size() * D::kDaySeconds;
  g.price.assign(n, std::numeric_limits<double>::quiet_NaN());
  g.returns.assign(n, 0.0);
  g.volume.assign(n, 0.0);
  g.event.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.bernoulli(config.event_probability)) {
      const double lnv = 7.0 + rng.normal();
      g.volume[i] = (rng.bernoulli(0.5) ? 1.0 : -1.0) * std::max(lnv, 0.0);
      g.event[i] = 1;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double eta = rng.normal();
    const auto k = static_cast<std::int32_t>(i % D::kDaySeconds);
    const std::int32_t start = D::session_start(k);
    if (k == start) continue;
    double r = eta;
    for (std::size_t m = 0; m < config.beta.size(); ++m) {
      const auto lag = static_cast<std::int32_t>(5 * m);
      if (k - lag < start) break;
      r += config.beta[m] * g.volume[i - static_cast<std::size_t>(lag)];
    }
    g.returns[i] = r;
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (double r : g.returns) {
    if (r == 0.0) continue;
    sum += r;
    sum_sq += r * r;
    ++count;
  }
  const double mean = sum / static_cast<double>(count);
  g.return_scale = std::sqrt((sum_sq - static_cast<double>(count) * mean * mean) / static_cast<double>(count - 1));
  for (double& r : g.returns) r /= g.return_scale;
  double log_p = std::log(50.0);
  for (std::size_t i = 0; i < n; ++i) {
    log_p += g.returns[i] * 1e-4;
    g.price[i] = std::exp(log_p);
  }
  return g;
}

std::string_view to_string(PlantedLabel label) {
  switch (label) {
    case PlantedLabel::Accepted: return "accepted";
    case PlantedLabel::ThetaFail: return "theta_fail";
    case PlantedLabel::FewMarket: return "few_market";
  }
  return "?";
}

}  // namespace tradepack::synth
