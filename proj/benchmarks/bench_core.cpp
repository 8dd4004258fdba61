#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "tradepack/detect.hpp"
#include "tradepack/ingest.hpp"
#include "tradepack/ols.hpp"
#include "tradepack/powerlaw.hpp"
#include "tradepack/synth.hpp"

namespace tp = tradepack;

namespace {

const tp::synth::Market& market() {
  static const tp::synth::Market m = [] {
    tp::synth::SynthConfig c;
    c.seed = 7;
    c.n_stocks = 5;
    c.background.enabled = true;
    c.background.print_probability = 0.2;
    return tp::synth::generate_market(c);
  }();
  return m;
}

void BM_ParseTradeFile(benchmark::State& state) {
  std::ostringstream out;
  tp::write_trade_file(out, market().records);
  const std::string text = out.str();
  for (auto _ : state) {
    std::istringstream in(text);
    benchmark::DoNotOptimize(tp::parse_trade_file(in));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(market().records.size()));
}
BENCHMARK(BM_ParseTradeFile)->Unit(benchmark::kMillisecond);

void BM_DetectPackages(benchmark::State& state) {
  const auto merged = tp::merge_same_time_trades(market().records);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tp::detect_packages(merged, tp::DetectorConfig{}, static_cast<int>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(merged.size()));
}
BENCHMARK(BM_DetectPackages)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_XminScan(benchmark::State& state) {
  const auto xs = tp::powerlaw::sample(tp::powerlaw::make_unbounded(2.4, 1.0),
                                       static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tp::powerlaw::fit_with_xmin_scan(xs, tp::powerlaw::Regime::UnboundedTail));
  }
}
BENCHMARK(BM_XminScan)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Ols(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  tp::DesignMatrix x(n, 12);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < 12; ++j) x(i, j) = j == 0 ? 1.0 : z(rng);
    y[i] = z(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(tp::ols(x, y));
}
BENCHMARK(BM_Ols)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
