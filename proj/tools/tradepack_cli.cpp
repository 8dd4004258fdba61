#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tradepack/pipeline.hpp"
#include "tradepack/synth.hpp"
#include "tradepack/text.hpp"

namespace tp = tradepack;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out_dir;
};

struct DataFlags {
  std::string input;
  std::string metadata;
  bool lenient = false;
  std::optional<int> break_days;
  std::optional<double> theta;
  std::optional<int> min_market;
  bool one_day_only = false;
  std::optional<std::string> investor_type;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tp::Error(tp::ErrorCode::Io, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void add_data_flags(CLI::App* cmd, DataFlags& f) {
  cmd->add_option("--input", f.input, "Trade CSV (stock,investor,itype,date,time,side,aggr,price,volume)");
  cmd->add_option("--metadata", f.metadata, "Stock metadata TSV for the summary table");
  cmd->add_flag("--lenient", f.lenient, "Skip malformed rows instead of failing");
  cmd->add_option("--break-days", f.break_days, "Trading-day gap that ends a package")->check(CLI::PositiveNumber);
  cmd->add_option("--theta", f.theta, "Dominant-side volume fraction threshold");
  cmd->add_option("--min-market", f.min_market, "Market-order trades must exceed this");
  cmd->add_flag("--one-day-only", f.one_day_only, "Keep only packages inside one trading day");
  cmd->add_option("--investor-type", f.investor_type, "inst, indiv or all")
      ->check(CLI::IsMember({"inst", "indiv", "all"}));
}

tp::PipelineConfig base_config(const Globals& g, const DataFlags& f) {
  tp::PipelineConfig c;
  if (!g.config.empty()) c = tp::pipeline_config_from_json(slurp(g.config));
  if (!f.input.empty()) c.input = f.input;
  if (!f.metadata.empty()) c.metadata = f.metadata;
  if (f.lenient) c.parse_mode = tp::ParseMode::Lenient;
  if (f.break_days) c.detector.break_days = *f.break_days;
  if (f.theta) c.detector.theta = *f.theta;
  if (f.min_market) c.detector.min_market_trades = *f.min_market;
  if (f.one_day_only) c.detector.one_day_only = true;
  if (f.investor_type) {
    if (*f.investor_type == "inst") c.investor_type = tp::InvestorType::Institution;
    else if (*f.investor_type == "indiv") c.investor_type = tp::InvestorType::Individual;
    else c.investor_type.reset();
  }
  c.detector.validate();
  if (g.seed) c.seed = g.seed;
  if (g.jobs) c.jobs = *g.jobs;
  if (g.out_dir) c.out_dir = *g.out_dir;
  return c;
}

int run(const tp::PipelineConfig& c) {
  const auto outcome = tp::run_pipeline(c);
  if (!outcome.ok) {
    std::cerr << "tradepack: stage " << outcome.failed_stage << " failed: " << outcome.message << "\n";
    if (!outcome.manifest_path.empty()) std::cerr << "manifest: " << outcome.manifest_path << "\n";
    return 1;
  }
  std::cout << "manifest: " << outcome.manifest_path << "\n";
  return 0;
}

std::vector<int> parse_lags(const std::string& csv) {
  std::vector<int> lags;
  for (auto part : tp::text::split(csv, ',')) {
    try {
      lags.push_back(std::stoi(std::string(part)));
    } catch (const std::exception&) {
      throw tp::Error(tp::ErrorCode::InvalidArgument, "bad lag '" + std::string(part) + "'");
    }
  }
  return lags;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trade-package detection and price-impact analysis"};
  app.set_version_flag("--version", tp::version());
  app.require_subcommand(1);

  Globals g;
  app.add_option("--config", g.config, "Pipeline config JSON (synth: generator config JSON)");
  app.add_option("--seed", g.seed, "Seed for synthetic data");
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g.out_dir, "Output directory");

  DataFlags data;
  std::optional<tp::PipelineConfig> pending;
  std::function<void()> action;

  auto stage_command = [&](const char* name, const char* help) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->fallthrough();
    add_data_flags(cmd, data);
    return cmd;
  };

  auto* summarize = stage_command("summarize", "Per-stock investor and trade counts");
  summarize->callback([&] {
    auto c = base_config(g, data);
    c.stages = {"summarize"};
    pending = c;
  });

  auto* detect = stage_command("detect", "Detect trade packages");
  detect->callback([&] {
    auto c = base_config(g, data);
    c.stages = {"detect"};
    pending = c;
  });

  std::vector<std::string> fit_vars;
  std::optional<std::string> regime;
  auto* fit = stage_command("fit-pdf", "Power-law fits of T, N and V");
  fit->add_option("--var", fit_vars, "T, N or V (repeatable)")->check(CLI::IsMember({"T", "N", "V"}));
  fit->add_option("--regime", regime, "bounded or tail")->check(CLI::IsMember({"bounded", "tail"}));
  fit->callback([&] {
    auto c = base_config(g, data);
    if (!fit_vars.empty()) c.fit_vars = fit_vars;
    if (regime) {
      c.fit_regime = *regime == "bounded" ? tp::powerlaw::Regime::BoundedGeneral : tp::powerlaw::Regime::UnboundedTail;
    }
    c.stages = {"fit-pdf"};
    pending = c;
  });

  std::optional<std::size_t> scaling_bins;
  std::optional<double> window_top;
  auto* scaling = stage_command("scaling", "Scaling exponents g1, g2, g3");
  scaling->add_option("--bins", scaling_bins, "Equal-count bins")->check(CLI::PositiveNumber);
  scaling->add_option("--window-top-frac", window_top, "Fraction of top bins used in the fit")
      ->check(CLI::Range(0.0, 1.0));
  scaling->callback([&] {
    auto c = base_config(g, data);
    if (scaling_bins) c.scaling.n_bins = *scaling_bins;
    if (window_top) c.scaling.window.top_fraction = *window_top;
    c.stages = {"scaling"};
    pending = c;
  });

  std::optional<std::size_t> profile_bins;
  auto* profile = stage_command("profile", "Intraday trading profiles");
  profile->add_option("--bins", profile_bins, "Time bins over the trading day")->check(CLI::PositiveNumber);
  profile->callback([&] {
    auto c = base_config(g, data);
    if (profile_bins) c.profile_bins = *profile_bins;
    c.stages = {"profile"};
    pending = c;
  });

  std::optional<std::string> level;
  std::optional<std::string> condition;
  std::optional<std::string> fm;
  std::optional<std::size_t> impact_bins;
  auto* impact = stage_command("impact", "Package and transaction price impact");
  impact->add_option("--level", level, "package, transaction or both")
      ->check(CLI::IsMember({"package", "transaction", "both"}));
  impact->add_option("--condition", condition, "T, V, t or v")->check(CLI::IsMember({"T", "V", "t", "v"}));
  impact->add_option("--fm", fm, "gt08, lt02 or all")->check(CLI::IsMember({"gt08", "lt02", "all"}));
  impact->add_option("--bins", impact_bins, "Equal-count bins")->check(CLI::PositiveNumber);
  impact->callback([&] {
    auto c = base_config(g, data);
    if (level) {
      c.impact_level = *level == "package"       ? tp::ImpactLevel::Package
                       : *level == "transaction" ? tp::ImpactLevel::Transaction
                                                 : tp::ImpactLevel::Both;
    }
    if (condition) {
      c.impact_condition = *condition == "T"   ? tp::Condition::ExecutionTime
                           : *condition == "V" ? tp::Condition::TotalVolume
                           : *condition == "t" ? tp::Condition::DayTime
                                               : tp::Condition::TradeVolume;
    }
    if (fm) {
      c.impact_fm = *fm == "gt08" ? tp::FmFilter::Above08 : *fm == "lt02" ? tp::FmFilter::Below02 : tp::FmFilter::All;
    }
    if (impact_bins) c.impact_bins = *impact_bins;
    c.stages = {"impact"};
    pending = c;
  });

  std::optional<std::string> model;
  std::optional<std::string> lags;
  std::optional<std::string> aggressor;
  std::optional<std::string> observations;
  auto* regress = stage_command("regress", "Lagged-volume and AR+volume return regressions");
  regress->add_option("--model", model, "lagged, ar or both")->check(CLI::IsMember({"lagged", "ar", "both"}));
  regress->add_option("--lags", lags, "Comma-separated lags in seconds");
  regress->add_option("--aggressor", aggressor, "market, limit or all")
      ->check(CLI::IsMember({"market", "limit", "all"}));
  regress->add_option("--observations", observations, "package or all (AR model)")
      ->check(CLI::IsMember({"package", "all"}));
  regress->callback([&] {
    auto c = base_config(g, data);
    if (model) {
      c.regress_model = *model == "lagged" ? tp::RegressModel::Lagged
                        : *model == "ar"   ? tp::RegressModel::Ar
                                           : tp::RegressModel::Both;
    }
    if (lags) c.lags = parse_lags(*lags);
    if (aggressor) {
      if (*aggressor == "all") c.regress_aggressor.reset();
      else c.regress_aggressor = *aggressor == "market" ? tp::Aggressor::MarketOrder : tp::Aggressor::LimitOrder;
    }
    if (observations) {
      c.observations = *observations == "all" ? tp::ObservationSet::AllSeconds : tp::ObservationSet::PackageSeconds;
    }
    c.stages = {"regress"};
    pending = c;
  });

  auto* all = stage_command("run", "Run every stage from a pipeline config");
  all->callback([&] { pending = base_config(g, data); });

  std::string synth_out = "synth.csv";
  std::string truth_out = "truth.json";
  auto* synth = app.add_subcommand("synth", "Generate a synthetic market with its ground truth");
  synth->fallthrough();
  synth->add_option("--out", synth_out, "Trade CSV to write");
  synth->add_option("--truth", truth_out, "Truth JSON to write");
  synth->callback([&] {
    action = [&] {
      tp::synth::SynthConfig cfg;
      if (!g.config.empty()) cfg = tp::synth::config_from_json(slurp(g.config));
      if (g.seed) cfg.seed = *g.seed;
      const auto market = tp::synth::generate_market(cfg, g.jobs.value_or(1));
      namespace fs = std::filesystem;
      const fs::path dir = g.out_dir.value_or(".");
      fs::create_directories(dir);
      std::ofstream data_out(dir / synth_out, std::ios::binary);
      tp::write_trade_file(data_out, market.records);
      std::ofstream truth_file(dir / truth_out, std::ios::binary);
      truth_file << tp::synth::truth_to_json(market.truth);
      if (!data_out || !truth_file) throw tp::Error(tp::ErrorCode::Io, "cannot write synth outputs");
      std::cout << market.records.size() << " records, " << market.truth.packages.size()
                << " planted packages (" << market.truth.accepted_count() << " accepted)\n";
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "tradepack: " << e.what() << "\n";
    return 2;
  }

  try {
    if (action) {
      action();
      return 0;
    }
    if (pending) return run(*pending);
  } catch (const std::exception& e) {
    std::cerr << "tradepack: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
