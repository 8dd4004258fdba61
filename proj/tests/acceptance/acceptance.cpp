// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "builders.hpp"
#include "oracles.hpp"
#include "tradepack/anova.hpp"
#include "tradepack/detect.hpp"
#include "tradepack/impact.hpp"
#include "tradepack/ols.hpp"
#include "tradepack/pipeline.hpp"
#include "tradepack/powerlaw.hpp"
#include "tradepack/regress.hpp"
#include "tradepack/scaling.hpp"
#include "tradepack/synth.hpp"

namespace tp = tradepack;
namespace pl = tradepack::powerlaw;
namespace oracle = tptest::oracle;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Inverse-CDF draws written from the closed forms.
double draw_bounded(double delta, double a, double b, double u) {
  if (std::abs(1.0 - delta) < 1e-12) return a * std::pow(b / a, u);
  const double e = 1.0 - delta;
  return std::pow(std::pow(a, e) + u * (std::pow(b, e) - std::pow(a, e)), 1.0 / e);
}

double draw_tail(double delta, double a, double u) { return a * std::pow(1.0 - u, -1.0 / (delta - 1.0)); }

using PackageKey = std::tuple<std::string, std::uint64_t, tp::Timestamp, tp::Timestamp, std::int64_t>;

std::set<PackageKey> planted_keys(const tp::synth::GroundTruth& truth) {
  std::set<PackageKey> out;
  for (const auto& p : truth.packages) {
    if (p.label != tp::synth::PlantedLabel::Accepted) continue;
    out.emplace(p.stock.str(), p.investor, p.first, p.last, p.trade_count);
  }
  return out;
}

std::set<PackageKey> detected_keys(const std::vector<tp::TradePackage>& packages) {
  std::set<PackageKey> out;
  for (const auto& p : packages) {
    out.emplace(p.stock.str(), p.investor, p.first_time(), p.last_time(),
                static_cast<std::int64_t>(p.trade_count));
  }
  return out;
}

// 1. Planted packages are recovered exactly; noise adds no false positives.
Outcome detection_oracle() {
  tp::synth::SynthConfig c;
  c.seed = 101;
  c.n_stocks = 5;
  c.packages_per_stock = 100;
  const auto clean = tp::synth::generate_market(c);
  const auto found = tp::detect_packages(tp::merge_same_time_trades(clean.records), tp::DetectorConfig{});
  const auto want = planted_keys(clean.truth);
  const auto got = detected_keys(found);
  std::size_t hit = 0;
  for (const auto& k : want) hit += got.count(k);
  const bool exact = want.size() == 500 && got == want;

  c.background.enabled = true;
  c.decoys.theta_fail = 0.1;
  c.decoys.few_market = 0.1;
  const auto noisy = tp::synth::generate_market(c);
  const auto found_noisy =
      tp::detect_packages(tp::merge_same_time_trades(noisy.records), tp::DetectorConfig{});
  const auto want_noisy = planted_keys(noisy.truth);
  std::size_t true_pos = 0;
  for (const auto& k : detected_keys(found_noisy)) true_pos += want_noisy.count(k);
  const double precision =
      found_noisy.empty() ? 0.0 : static_cast<double>(true_pos) / static_cast<double>(found_noisy.size());
  std::ostringstream d;
  d << "clean recall " << hit << "/" << want.size() << " exact=" << exact << "; noisy precision "
    << true_pos << "/" << found_noisy.size() << " over " << noisy.records.size() << " prints";
  return {exact && precision == 1.0 && !found_noisy.empty(), d.str()};
}

// 2. Root-solved bounded MLE agrees with a likelihood grid search.
Outcome bounded_mle_vs_grid() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double delta = 0.2 + 0.75 * u01(rng);
    const double a = 1.0 + 99.0 * u01(rng);
    const double b = a * std::exp(std::log(10.0) + std::log(100.0) * u01(rng));
    std::vector<double> xs(10000);
    double mean_log = 0.0;
    for (double& x : xs) {
      x = draw_bounded(delta, a, b, u01(rng));
      mean_log += std::log(x);
    }
    mean_log /= static_cast<double>(xs.size());
    const double root = pl::mle_delta_bounded(xs, a, b);
    double best = 0.0, best_ll = -INFINITY;
    for (int i = 0; i <= 49900; ++i) {
      const double d = 0.01 + 1e-4 * i;
      const double ll = oracle::bounded_mean_loglik(d, mean_log, a, b);
      if (ll > best_ll) {
        best_ll = ll;
        best = d;
      }
    }
    worst = std::max(worst, std::abs(root - best));
  }
  return {worst <= 2e-4, "max |root - grid| = " + fmt("%.2e", worst)};
}

// 3. Exponents at the planted cutoffs land within 2 sigma in at least 18 of
// the first 20 repetitions; 200 repetitions also check the 2-sigma coverage.
Outcome exponent_recovery() {
  struct Var {
    const char* name;
    pl::Regime regime;
    double delta, x_min, x_max;
    int hits20 = 0;
    int hits200 = 0;
  };
  std::vector<Var> vars{{"T", pl::Regime::BoundedGeneral, 0.30, 30.0, 14400.0},
                        {"N", pl::Regime::UnboundedTail, 2.92, 8.0, 0.0},
                        {"V", pl::Regime::UnboundedTail, 2.40, 2.0e4, 0.0}};
  for (int rep = 0; rep < 200; ++rep) {
    for (std::size_t v = 0; v < vars.size(); ++v) {
      auto& var = vars[v];
      std::seed_seq seq{static_cast<unsigned>(rep), static_cast<unsigned>(v)};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> u01(0.0, 1.0);
      std::vector<double> xs(100000);
      for (double& x : xs) {
        x = var.regime == pl::Regime::BoundedGeneral ? draw_bounded(var.delta, var.x_min, var.x_max, u01(rng))
                                                     : draw_tail(var.delta, var.x_min, u01(rng));
      }
      const auto fit = pl::fit_at_xmin(xs, var.regime, var.x_min);
      const bool hit = std::abs(fit.delta - var.delta) <= 2.0 * fit.sigma;
      var.hits200 += hit;
      if (rep < 20) var.hits20 += hit;
    }
  }
  std::ostringstream d;
  bool ok = true;
  for (const auto& v : vars) {
    d << v.name << " " << v.hits20 << "/20 (" << v.hits200 << "/200) ";
    ok = ok && v.hits20 >= 18 && v.hits200 >= 180;
  }
  return {ok, d.str()};
}

// 4. The KS scan equals trying every admissible cutoff.
Outcome ks_scan_equivalence() {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int cases = 0, equal = 0;
  double worst_ks = 0.0;
  for (int k = 0; k < 24; ++k) {
    const std::size_t n = 50 + static_cast<std::size_t>(950.0 * u01(rng));
    const bool bounded = k % 2 == 0;
    std::vector<double> xs(n);
    for (double& x : xs) {
      // Body below 5 mixed with a power-law tail; every third case rounds to create ties.
      const double tail = bounded ? draw_bounded(0.5, 5.0, 500.0, u01(rng)) : draw_tail(2.5, 5.0, u01(rng));
      x = u01(rng) < 0.3 ? 1.0 + 4.0 * u01(rng) : tail;
      if (k % 3 == 0) x = std::round(x * 10.0) / 10.0;
    }
    const auto regime = bounded ? pl::Regime::BoundedGeneral : pl::Regime::UnboundedTail;
    const auto scan = pl::fit_with_xmin_scan(xs, regime);

    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    double best_ks = INFINITY, best_xmin = 0.0, best_delta = 0.0;
    for (std::size_t i = 0; i + 10 < n; ++i) {
      if (i > 0 && sorted[i] == sorted[i - 1]) continue;
      pl::PowerLawFit f;
      try {
        f = pl::fit_at_xmin(xs, regime, sorted[i]);
      } catch (const tp::Error&) {
        continue;
      }
      std::vector<double> tail(sorted.begin() + static_cast<std::ptrdiff_t>(i), sorted.end());
      const double ks = oracle::ks_double_loop(tail, [&](double x) { return pl::cdf(f, x); });
      if (ks < best_ks) {
        best_ks = ks;
        best_xmin = f.x_min;
        best_delta = f.delta;
      }
    }
    ++cases;
    worst_ks = std::max(worst_ks, std::abs(best_ks - scan.ks));
    if (best_xmin == scan.x_min && best_delta == scan.delta && std::abs(best_ks - scan.ks) <= 1e-12) ++equal;
  }
  return {equal == cases, std::to_string(equal) + "/" + std::to_string(cases) +
                              " identical, max KS diff " + fmt("%.1e", worst_ks)};
}

// 5. g1 matches g2 * g3 within the combined standard error.
Outcome scaling_identity() {
  tp::synth::SynthConfig c;
  c.seed = 505;
  c.n_stocks = 20;
  c.packages_per_stock = 500;
  c.trading_days = 120;
  c.investors_per_type = 100;
  const auto m = tp::synth::generate_market(c);
  const auto packages = tp::detect_packages(tp::merge_same_time_trades(m.records), tp::DetectorConfig{});
  const auto s = tp::scaling_exponents(packages);
  std::ostringstream d;
  d << packages.size() << " packages: g1=" << fmt("%.4f", s.g1.exponent) << " g2=" << fmt("%.4f", s.g2.exponent)
    << " g3=" << fmt("%.4f", s.g3.exponent) << " |g1-g2g3|=" << fmt("%.4f", s.product_gap)
    << " 2se=" << fmt("%.4f", 2.0 * s.gap_stderr);
  return {s.product_gap < 2.0 * s.gap_stderr, d.str()};
}

// 6. Package impact exponent from a planted A V^gamma drift.
Outcome impact_power_law() {
  tp::synth::SynthConfig c;
  c.seed = 606;
  c.n_stocks = 10;
  c.packages_per_stock = 1000;
  // Sparse days keep packages of one stock from overlapping, so each bin's
  // noise is its own packages' and the OLS stderr on bin means is honest.
  c.trading_days = 20000;
  c.investors_per_type = 50;
  c.volume = {.delta = 1.0, .x_min = 1.0e3, .x_max = 1.0e5};
  c.split.n_prefactor = 0.05;
  c.split.t_prefactor = 2700.0;
  c.orders.market_probability = 0.9;
  c.impact.package_prefactor = 0.003;
  c.impact.package_exponent = 0.447;
  // A high start keeps the tick small relative to prices after 1000 drifts.
  c.initial_price = 1.0e4;
  const auto m = tp::synth::generate_market(c);
  const auto packages = tp::detect_packages(tp::merge_same_time_trades(m.records), tp::DetectorConfig{});
  const auto impacts = tp::package_impacts(packages);
  tp::ImpactQuery q;
  q.condition = tp::Condition::TotalVolume;
  q.fm = tp::FmFilter::Above08;
  const auto series = tp::conditional_impact(impacts, q);
  const auto fit = tp::fit_impact_powerlaw(series);
  std::size_t used = 0;
  for (const auto& b : series.bins) used += b.count;
  std::ostringstream d;
  d << used << " packages with F_m>0.8: gamma=" << fmt("%.4f", fit.exponent) << " +- "
    << fmt("%.4f", fit.exponent_stderr);
  return {used >= 8000 && std::abs(fit.exponent - 0.447) <= 2.0 * fit.exponent_stderr, d.str()};
}

// 7. Lagged-volume betas are recovered; pure noise rejects at the nominal rate.
Outcome regression_recovery() {
  tp::synth::SynthConfig c;
  c.seed = 707;
  c.n_stocks = 1;
  c.packages_per_stock = 600;
  c.trading_days = 40;
  c.investors_per_type = 60;
  c.impact.sigma = 2e-4;
  c.impact.trade_beta = {0.1, -0.02};
  c.background.enabled = true;
  c.background.print_probability = 1.0;
  const auto m = tp::synth::generate_market(c);
  const auto merged = tp::merge_same_time_trades(m.records);
  const auto packages = tp::detect_packages(merged, tp::DetectorConfig{});
  const tp::TransactionFilter market{.aggressor = tp::Aggressor::MarketOrder};
  const auto grids = tp::build_second_grids(merged, packages, market);
  const auto fits = tp::regress_lagged_volume(grids.at(0), {.lags = {0, 5}});
  // Returns are divided by their sample std, so the planted coefficient is
  // beta * sigma / return_scale in the regression's units.
  const double unit = c.impact.sigma / grids[0].return_scale;
  bool ok = true;
  std::ostringstream d;
  for (std::size_t i = 0; i < 2; ++i) {
    const double want = c.impact.trade_beta[i] * unit;
    const double z = (fits[i].beta() - want) / fits[i].beta_stderr();
    ok = ok && std::abs(z) <= 2.0;
    d << "lag " << fits[i].lag << " z=" << fmt("%+.2f", z) << " ";
  }

  std::size_t tests = 0, rejections = 0;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    tp::synth::NoiseGridConfig g;
    g.seed = seed;
    g.days = 2;
    g.event_probability = 0.01;
    for (const auto& f : tp::regress_lagged_volume(tp::synth::noise_grid(g))) {
      ++tests;
      rejections += f.beta_significant();
    }
  }
  const double rate = static_cast<double>(rejections) / static_cast<double>(tests);
  d << "; size " << fmt("%.4f", rate) << " over " << tests << " tests";
  return {ok && rate >= 0.04 && rate <= 0.06, d.str()};
}

// 8. Adding return lags never lowers R^2 on the same observations.
Outcome ar_nesting() {
  int checked = 0, held = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    tp::synth::NoiseGridConfig g;
    g.seed = 8000 + seed;
    g.days = 2;
    g.event_probability = 0.02;
    if (seed % 2 == 0) g.beta = {0.1, 0.0, -0.05};
    const auto grid = tp::synth::noise_grid(g);
    const auto volume_only = tp::regress_lagged_volume(grid, {.lags = {0}, .min_history = 25});
    const auto full = tp::regress_ar_volume(grid);
    ++checked;
    if (full.fit.n_obs == volume_only[0].fit.n_obs && full.fit.r_squared >= volume_only[0].fit.r_squared) ++held;
  }
  return {held == checked, std::to_string(held) + "/" + std::to_string(checked) + " grids"};
}

// 9. OLS, ANOVA and KS against textbook references.
Outcome numeric_oracles() {
  std::mt19937_64 rng(909);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double ols_err = 0.0, anova_err = 0.0, ks_err = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 30 + static_cast<std::size_t>(470 * u01(rng));
    const std::size_t cols = 2 + static_cast<std::size_t>(k % 7);
    tp::DesignMatrix x(n, cols);
    std::vector<double> raw, y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = z(rng);
      for (std::size_t j = 0; j < cols; ++j) {
        x(i, j) = j == 0 ? 1.0 : z(rng) * (1.0 + j);
        raw.push_back(x(i, j));
        y[i] += 0.1 * static_cast<double>(j) * x(i, j);
      }
    }
    const auto fit = tp::ols(x, y);
    const auto ref = oracle::normal_equations(raw, n, cols, y);
    for (std::size_t j = 0; j < cols; ++j) {
      ols_err = std::max(ols_err, std::abs(fit.coefficients[j] - ref.beta[j]));
      ols_err = std::max(ols_err, std::abs(fit.std_errors[j] - ref.stderr_[j]));
    }
    ols_err = std::max(ols_err, std::abs(fit.r_squared - ref.r_squared));

    std::vector<std::vector<double>> groups(2 + static_cast<std::size_t>(k % 9));
    for (std::size_t g = 0; g < groups.size(); ++g) {
      groups[g].resize(2 + static_cast<std::size_t>(20 * u01(rng)));
      for (double& v : groups[g]) v = 0.1 * static_cast<double>(g) + z(rng);
    }
    const auto a = tp::anova_oneway(groups);
    const auto b = oracle::two_pass_anova(groups);
    anova_err = std::max(anova_err, std::abs(a.f - b.f) / std::max(1.0, std::abs(b.f)));

    const auto law = k % 2 ? pl::make_unbounded(1.5 + 2.0 * u01(rng), 1.0)
                           : pl::make_bounded(-1.0 + 3.0 * u01(rng), 1.0, 1000.0);
    std::vector<double> xs(20 + static_cast<std::size_t>(480 * u01(rng)));
    for (double& v : xs) {
      v = pl::quantile(law, u01(rng));
      if (k % 4 == 0) v = std::max(1.0, std::round(v));
    }
    ks_err = std::max(ks_err, std::abs(pl::ks_statistic(xs, law) -
                                       oracle::ks_double_loop(xs, [&](double v) { return pl::cdf(law, v); })));
  }
  std::ostringstream d;
  d << "OLS " << fmt("%.1e", ols_err) << ", ANOVA " << fmt("%.1e", anova_err) << ", KS " << fmt("%.1e", ks_err);
  return {ols_err <= 1e-10 && anova_err <= 1e-10 && ks_err <= 1e-12, d.str()};
}

// 10. Same config and seed give byte-identical manifests.
Outcome determinism() {
  auto run_once = [](const std::string& dir, int jobs) {
    tp::PipelineConfig c;
    tp::synth::SynthConfig s;
    s.n_stocks = 3;
    s.packages_per_stock = 150;
    s.background.enabled = true;
    s.impact.trade_beta = {0.1, -0.02};
    c.synth = s;
    c.seed = 1010;
    c.jobs = jobs;
    c.out_dir = tptest::scratch_dir(dir).string();
    const auto outcome = tp::run_pipeline(c);
    std::ifstream in(outcome.manifest_path, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return std::make_pair(outcome.ok, text.str());
  };
  const auto a = run_once("determinism_a", 1);
  const auto b = run_once("determinism_b", 1);
  const auto c = run_once("determinism_c", 2);
  const bool ok = a.first && b.first && c.first && !a.second.empty() && a.second == b.second &&
                  a.second == c.second;
  return {ok, std::string("manifest ") + std::to_string(a.second.size()) + " bytes, reruns " +
                  (a.second == b.second ? "identical" : "differ") + ", jobs=2 " +
                  (a.second == c.second ? "identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"detection oracle", detection_oracle},
      {"bounded MLE vs grid search", bounded_mle_vs_grid},
      {"exponent recovery", exponent_recovery},
      {"KS scan equivalence", ks_scan_equivalence},
      {"scaling identity", scaling_identity},
      {"impact power law", impact_power_law},
      {"regression recovery and size", regression_recovery},
      {"AR nesting", ar_nesting},
      {"numeric oracles", numeric_oracles},
      {"determinism", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > 120.0) {
      o.pass = false;
      o.detail += " (over the 2 minute budget)";
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << criteria[i].first << ": " << o.detail << " ["
              << fmt("%.1f", secs) << "s]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
