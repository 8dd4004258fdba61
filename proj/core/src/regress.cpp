#include "tradepack/regress.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "tradepack/parallel.hpp"
#include "tradepack/text.hpp"

namespace tradepack {

namespace D = day_clock;

bool TransactionFilter::accepts(const TradeRecord& trade) const noexcept {
  if (investor_type && trade.investor_type != *investor_type) return false;
  if (aggressor && trade.aggressor != *aggressor) return false;
  return true;
}

SecondGrid build_second_grid(const StockCode& stock, std::span<const TradeRecord> records,
                             std::span<const TradePackage> packages,
                             const TransactionFilter& filter, const TradingCalendar* calendar) {
  SecondGrid g;
  g.stock = stock;
  std::vector<const TradeRecord*> prints;
  for (const auto& r : records) {
    if (r.stock == stock) prints.push_back(&r);
  }
  std::stable_sort(prints.begin(), prints.end(),
                   [](const TradeRecord* a, const TradeRecord* b) { return a->time < b->time; });
  for (const auto* p : prints) {
    if (g.days.empty() || g.days.back() != p->time.date) g.days.push_back(p->time.date);
  }
  if (calendar != nullptr) {
    std::size_t present = 0;
    for (Date d : calendar->dates()) present += std::binary_search(g.days.begin(), g.days.end(), d);
    g.skipped_days = calendar->size() - present;
  }

  const std::size_t n = g.days.size() * D::kDaySeconds;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  g.price.assign(n, nan);
  g.returns.assign(n, 0.0);
  g.volume.assign(n, 0.0);
  g.event.assign(n, 0);

  // Last print of each second.
  std::vector<double> last(n, nan);
  std::size_t day = 0;
  for (const auto* p : prints) {
    while (g.days[day] != p->time.date) ++day;
    last[day * D::kDaySeconds + static_cast<std::size_t>(D::slot(p->time.seconds))] = p->price;
  }

  for (std::size_t d = 0; d < g.days.size(); ++d) {
    const std::size_t base = d * D::kDaySeconds;
    double prev = nan;
    bool seen_in_session = false;
    for (std::int32_t k = 0; k < D::kDaySeconds; ++k) {
      if (k == D::kHalfDay) seen_in_session = false;
      const std::size_t i = base + static_cast<std::size_t>(k);
      if (!std::isnan(last[i])) {
        if (seen_in_session && k != D::session_start(k)) {
          g.returns[i] = std::log(last[i]) - std::log(prev);
        }
        prev = last[i];
        seen_in_session = true;
      }
      g.price[i] = prev;
    }
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
  if (count >= 2) {
    const double mean = sum / static_cast<double>(count);
    const double var = (sum_sq - static_cast<double>(count) * mean * mean) / static_cast<double>(count - 1);
    if (var > 0.0) g.return_scale = std::sqrt(var);
  }
  for (double& r : g.returns) r /= g.return_scale;

  for (const auto& pkg : packages) {
    if (pkg.stock != stock) continue;
    for (const auto& t : pkg.trades) {
      if (!filter.accepts(t)) continue;
      const auto it = std::lower_bound(g.days.begin(), g.days.end(), t.time.date);
      if (it == g.days.end() || *it != t.time.date) continue;
      const std::size_t i = static_cast<std::size_t>(it - g.days.begin()) * D::kDaySeconds +
                            static_cast<std::size_t>(D::slot(t.time.seconds));
      g.volume[i] += sign_of(t.side) * std::log(static_cast<double>(t.volume));
      g.event[i] = 1;
    }
  }
  return g;
}

std::vector<SecondGrid> build_second_grids(std::span<const TradeRecord> records,
                                           std::span<const TradePackage> packages,
                                           const TransactionFilter& filter, int jobs) {
  const auto calendar = TradingCalendar::from_records(records);
  std::map<StockCode, std::vector<TradeRecord>> by_stock;
  for (const auto& r : records) by_stock[r.stock].push_back(r);
  std::map<StockCode, std::vector<TradePackage>> pkgs;
  for (const auto& p : packages) pkgs[p.stock].push_back(p);
  std::vector<StockCode> stocks;
  for (const auto& entry : by_stock) stocks.push_back(entry.first);
  std::vector<SecondGrid> grids(stocks.size());
  parallel_for(stocks.size(), jobs, [&](std::size_t s) {
    const auto it = pkgs.find(stocks[s]);
    const std::span<const TradePackage> own =
        it == pkgs.end() ? std::span<const TradePackage>{} : std::span<const TradePackage>{it->second};
    grids[s] = build_second_grid(stocks[s], by_stock.at(stocks[s]), own, filter, &calendar);
  });
  return grids;
}

namespace {

std::size_t count_events(const SecondGrid& g) {
  return static_cast<std::size_t>(std::count(g.event.begin(), g.event.end(), std::uint8_t{1}));
}

void require_events(const SecondGrid& g, std::size_t min_events) {
  const std::size_t events = count_events(g);
  if (events < min_events) {
    throw Error(ErrorCode::TooFewSamples, "stock " + g.stock.str() + " has " +
                                              std::to_string(events) + " package-transaction seconds");
  }
}

// Slot of index i inside its day.
std::int32_t slot_of(std::size_t i) {
  return static_cast<std::int32_t>(i % static_cast<std::size_t>(D::kDaySeconds));
}

bool same_session(std::int32_t slot, int offset) {
  const std::int32_t other = slot + offset;
  return other >= 0 && other < D::kDaySeconds && D::session_start(other) == D::session_start(slot);
}

}  // namespace

std::vector<LagFit> regress_lagged_volume(const SecondGrid& grid, const LaggedOptions& options) {
  require_events(grid, options.min_events);
  std::vector<LagFit> out;
  for (int lag : options.lags) {
    if (lag < 0) throw Error(ErrorCode::InvalidArgument, "lags must be non-negative");
    DesignMatrix x;
    std::vector<double> y;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid.event[i] == 0) continue;
      const std::int32_t k = slot_of(i);
      if (k - D::session_start(k) < options.min_history) continue;
      if (!same_session(k, lag)) continue;
      const double row[2] = {1.0, grid.volume[i]};
      x.push_row(row);
      y.push_back(grid.returns[i + static_cast<std::size_t>(lag)]);
    }
    out.push_back({lag, ols(x, y)});
  }
  return out;
}

ArFit regress_ar_volume(const SecondGrid& grid, const ArOptions& options) {
  require_events(grid, options.min_events);
  int history = 0;
  for (int j : options.return_lags) {
    if (j <= 0) throw Error(ErrorCode::InvalidArgument, "return lags must be positive");
    history = std::max(history, j);
  }
  for (int i : options.volume_lags) {
    if (i < 0) throw Error(ErrorCode::InvalidArgument, "volume lags must be non-negative");
    history = std::max(history, i);
  }
  ArFit out;
  out.names.push_back("const");
  for (int j : options.return_lags) out.names.push_back("R-" + std::to_string(j));
  for (int i : options.volume_lags) out.names.push_back("x-" + std::to_string(i));

  DesignMatrix x;
  std::vector<double> y;
  std::vector<double> row(out.names.size());
  for (std::size_t t = 0; t < grid.size(); ++t) {
    if (options.observations == ObservationSet::PackageSeconds && grid.event[t] == 0) continue;
    const std::int32_t k = slot_of(t);
    if (k - D::session_start(k) < history) continue;
    std::size_t c = 0;
    row[c++] = 1.0;
    for (int j : options.return_lags) row[c++] = grid.returns[t - static_cast<std::size_t>(j)];
    for (int i : options.volume_lags) row[c++] = grid.volume[t - static_cast<std::size_t>(i)];
    x.push_row(row);
    y.push_back(grid.returns[t]);
  }
  out.fit = ols(x, y, OlsOptions{.drop_collinear = true});
  return out;
}

void write_lagged_tsv(std::ostream& out, std::span<const SecondGrid> grids,
                      std::span<const std::vector<LagFit>> fits) {
  out << "stock";
  if (!fits.empty()) {
    for (const auto& f : fits.front()) out << "\tbeta_" << f.lag << "\tt_" << f.lag;
  }
  out << "\tn\tR2\n";
  for (std::size_t s = 0; s < fits.size(); ++s) {
    out << grids[s].stock.view();
    for (const auto& f : fits[s]) out << '\t' << text::number(f.beta()) << '\t' << text::number(f.beta_t());
    const auto& first = fits[s].front().fit;
    out << '\t' << first.n_obs << '\t' << text::number(first.r_squared) << '\n';
  }
}

void write_ar_tsv(std::ostream& out, std::span<const SecondGrid> grids, std::span<const ArFit> fits) {
  out << "stock";
  if (!fits.empty()) {
    for (const auto& name : fits.front().names) out << '\t' << name << "\tt(" << name << ')';
  }
  out << "\tn\tR2\n";
  for (std::size_t s = 0; s < fits.size(); ++s) {
    out << grids[s].stock.view();
    const auto& f = fits[s].fit;
    for (std::size_t c = 0; c < fits[s].names.size(); ++c) {
      if (f.dropped[c]) {
        out << "\tNA\tNA";
      } else {
        out << '\t' << text::number(f.coefficients[c]) << '\t' << text::number(f.t_stats[c]);
      }
    }
    out << '\t' << f.n_obs << '\t' << text::number(f.r_squared) << '\n';
  }
}

}  // namespace tradepack
