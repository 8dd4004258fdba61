#include "tradepack/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "tradepack/profile.hpp"
#include "tradepack/tape.hpp"
#include "tradepack/text.hpp"

#ifndef TRADEPACK_VERSION
#define TRADEPACK_VERSION "0.0.0"
#endif

namespace tradepack {

using nlohmann::json;
namespace fs = std::filesystem;

std::string version() { return TRADEPACK_VERSION; }

namespace {

// Non-finite values become null; finite ones keep 12 significant digits.
json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(text::number(v));
}

std::string investor_type_name(const std::optional<InvestorType>& t) {
  if (!t) return "all";
  return *t == InvestorType::Institution ? "inst" : "indiv";
}

std::optional<InvestorType> investor_type_from(const std::string& s) {
  if (s == "all") return std::nullopt;
  if (s == "inst") return InvestorType::Institution;
  if (s == "indiv") return InvestorType::Individual;
  throw Error(ErrorCode::InvalidArgument, "investor_type must be all, inst or indiv");
}

std::string aggressor_name(const std::optional<Aggressor>& a) {
  if (!a) return "all";
  return *a == Aggressor::MarketOrder ? "market" : "limit";
}

std::optional<Aggressor> aggressor_from(const std::string& s) {
  if (s == "all") return std::nullopt;
  if (s == "market") return Aggressor::MarketOrder;
  if (s == "limit") return Aggressor::LimitOrder;
  throw Error(ErrorCode::InvalidArgument, "aggressor must be all, market or limit");
}

Condition condition_from(const std::string& s) {
  if (s == "T") return Condition::ExecutionTime;
  if (s == "V") return Condition::TotalVolume;
  if (s == "t") return Condition::DayTime;
  if (s == "v") return Condition::TradeVolume;
  throw Error(ErrorCode::InvalidArgument, "condition must be T, V, t or v");
}

FmFilter fm_from(const std::string& s) {
  if (s == "all") return FmFilter::All;
  if (s == "gt08") return FmFilter::Above08;
  if (s == "lt02") return FmFilter::Below02;
  throw Error(ErrorCode::InvalidArgument, "fm must be all, gt08 or lt02");
}

template <typename Enum>
Enum level_from(const std::string& s, std::initializer_list<std::pair<const char*, Enum>> names,
                const char* what) {
  for (const auto& [name, value] : names) {
    if (s == name) return value;
  }
  throw Error(ErrorCode::InvalidArgument, std::string("bad ") + what + " '" + s + "'");
}

const char* level_name(ImpactLevel l) {
  return l == ImpactLevel::Package ? "package" : l == ImpactLevel::Transaction ? "transaction" : "both";
}

const char* model_name(RegressModel m) {
  return m == RegressModel::Lagged ? "lagged" : m == RegressModel::Ar ? "ar" : "both";
}

json fit_json(const powerlaw::PowerLawFit& f) {
  return {{"regime", f.regime == powerlaw::Regime::BoundedGeneral ? "bounded" : "tail"},
          {"delta", num(f.delta)},
          {"sigma", num(f.sigma)},
          {"xmin", num(f.x_min)},
          {"xmax", num(f.x_max)},
          {"ks", num(f.ks)},
          {"n_tail", f.n_tail},
          {"small_sample", f.small_sample}};
}

json loglog_json(const LogLogFit& f) {
  return {{"exponent", num(f.exponent)},
          {"stderr", num(f.exponent_stderr)},
          {"ln_prefactor", num(f.intercept)},
          {"ln_prefactor_stderr", num(f.intercept_stderr)},
          {"bins", f.bins_used}};
}

json anova_json(const AnovaResult& a) {
  return {{"F", num(a.f)},          {"p", num(a.p_value)},       {"df_between", a.df_between},
          {"df_within", a.df_within}, {"degenerate", a.degenerate}};
}

json impact_fit_json(const ImpactPowerLaw& f) {
  return {{"prefactor", num(f.prefactor)},
          {"prefactor_stderr", num(f.prefactor_stderr)},
          {"exponent", num(f.exponent)},
          {"exponent_stderr", num(f.exponent_stderr)},
          {"dominant_sign", f.dominant_sign},
          {"bins", f.bins_used},
          {"excluded_bins", f.excluded}};
}

json error_json(const std::exception& e) { return {{"error", e.what()}}; }

void write_bins(std::ostream& out, const std::string& prefix, const BinnedSeries& s) {
  for (std::size_t b = 0; b < s.bins.size(); ++b) {
    const auto& bin = s.bins[b];
    out << prefix << '\t' << b << '\t' << text::number(bin.lower) << '\t' << text::number(bin.upper)
        << '\t' << text::number(bin.condition_mean) << '\t' << text::number(bin.response_mean) << '\t'
        << text::number(bin.response_stderr) << '\t' << bin.count << '\n';
  }
}

class Run {
 public:
  explicit Run(const PipelineConfig& c) : c_(c), dir_(c.out_dir) {}

  PipelineOutcome execute();

 private:
  void load();
  void ensure_packages();
  void stage_summarize();
  void stage_detect();
  void stage_fit();
  void stage_scaling();
  void stage_profile();
  void stage_impact();
  void stage_regress();

  // Writes a file and records its checksum under the current stage.
  void emit(const std::string& name, const std::string& content);
  void emit_json(const std::string& name, const json& j) { emit(name, j.dump(2) + "\n"); }

  const PipelineConfig& c_;
  fs::path dir_;
  std::vector<TradeRecord> records_;
  std::optional<std::vector<TradePackage>> all_packages_;
  std::vector<TradePackage> packages_;  // after the investor-type filter
  DetectionReport report_;
  json stage_outputs_;
};

void Run::emit(const std::string& name, const std::string& content) {
  const fs::path path = dir_ / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
  stage_outputs_[name] = text::hex64(text::fnv1a64(content));
}

void Run::load() {
  if (!c_.input.empty()) {
    if (!fs::exists(c_.input)) throw Error(ErrorCode::Io, "input file not found: " + c_.input);
    auto parsed = read_trade_file(c_.input, c_.parse_mode);
    records_ = std::move(parsed.records);
  } else if (c_.synth) {
    auto cfg = *c_.synth;
    if (c_.seed) cfg.seed = *c_.seed;
    records_ = synth::generate_market(cfg, c_.jobs).records;
  } else {
    throw Error(ErrorCode::InvalidArgument, "config names neither an input file nor a synth config");
  }
  records_ = merge_same_time_trades(std::move(records_));
}

void Run::ensure_packages() {
  if (all_packages_) return;
  all_packages_ = detect_packages(records_, c_.detector, c_.jobs, &report_);
  packages_ = c_.investor_type ? filter_by_type(*all_packages_, *c_.investor_type) : *all_packages_;
}

void Run::stage_summarize() {
  auto summaries = summarize(records_);
  if (!c_.metadata.empty()) {
    std::ifstream in(c_.metadata);
    if (!in) throw Error(ErrorCode::Io, "metadata file not found: " + c_.metadata);
    attach_metadata(summaries, read_stock_metadata(in));
  }
  std::ostringstream out;
  write_summary_tsv(out, summaries);
  emit("summary.tsv", out.str());
}

void Run::stage_detect() {
  ensure_packages();
  std::ostringstream out;
  write_packages_tsv(out, packages_);
  emit("packages.tsv", out.str());

  json j;
  j["segments"] = report_.segments;
  j["accepted"] = report_.accepted;
  j["rejected_theta"] = report_.rejected_theta;
  j["rejected_market_orders"] = report_.rejected_market_orders;
  j["dropped_multi_day"] = report_.dropped_multi_day;
  j["investor_type"] = investor_type_name(c_.investor_type);
  j["packages"] = packages_.size();
  json by_type = json::object();
  for (const auto& [type, stats] : package_stats_by_type(packages_)) {
    by_type[type == InvestorType::Institution ? "inst" : "indiv"] = {
        {"N_p", stats.count},
        {"mean_T", num(stats.mean_execution_seconds)},
        {"mean_N", num(stats.mean_trade_count)},
        {"mean_V", num(stats.mean_total_volume)}};
  }
  j["by_type"] = std::move(by_type);
  emit_json("detection.json", j);
}

void Run::stage_fit() {
  ensure_packages();
  powerlaw::ScanOptions scan;
  scan.max_candidates = c_.fit_max_candidates;
  scan.jobs = c_.jobs;
  json j = json::object();
  for (const auto& var : c_.fit_vars) {
    std::vector<double> x;
    std::size_t nonpositive = 0;
    for (const auto& p : packages_) {
      const double v = var == "T"   ? static_cast<double>(p.execution_seconds)
                       : var == "N" ? static_cast<double>(p.trade_count)
                       : var == "V" ? static_cast<double>(p.total_volume)
                                    : throw Error(ErrorCode::InvalidArgument, "fit variable must be T, N or V");
      if (v > 0.0) {
        x.push_back(v);
      } else {
        ++nonpositive;
      }
    }
    const auto regime = c_.fit_regime.value_or(var == "T" ? powerlaw::Regime::BoundedGeneral
                                                          : powerlaw::Regime::UnboundedTail);
    try {
      j[var] = fit_json(powerlaw::fit_with_xmin_scan(x, regime, scan));
    } catch (const Error& e) {
      j[var] = error_json(e);
    }
    j[var]["excluded_nonpositive"] = nonpositive;
  }
  emit_json("powerlaw.json", j);
}

void Run::stage_scaling() {
  ensure_packages();
  std::ostringstream bins;
  bins << "relation\tbin\tlower\tupper\tx_mean\ty_mean\ty_se\tcount\n";
  json j;
  try {
    const auto r = scaling_exponents(packages_, c_.scaling);
    write_bins(bins, "T|V", r.t_given_v);
    write_bins(bins, "N|V", r.n_given_v);
    write_bins(bins, "T|N", r.t_given_n);
    j = {{"g1", loglog_json(r.g1)},
         {"g2", loglog_json(r.g2)},
         {"g3", loglog_json(r.g3)},
         {"gap", num(r.product_gap)},
         {"gap_stderr", num(r.gap_stderr)}};
  } catch (const Error& e) {
    j = error_json(e);
  }
  j["bins"] = c_.scaling.n_bins;
  j["window_top_frac"] = num(c_.scaling.window.top_fraction);
  emit("scaling_bins.tsv", bins.str());
  emit_json("scaling.json", j);
}

void Run::stage_profile() {
  ensure_packages();
  const MarketTape tape(records_);
  const std::size_t nb = c_.profile_bins;
  const auto tsv = [](const Profile& p) {
    std::ostringstream out;
    write_profile_tsv(out, p);
    return out.str();
  };
  for (auto sel : {VolumeSelector::MarketOnly, VolumeSelector::LimitOnly, VolumeSelector::All,
                   VolumeSelector::ConcurrentTrades}) {
    const auto points = profile_points(packages_, tape, sel);
    emit("profile_volume_" + std::string(to_string(sel)) + ".tsv", tsv(mean_volume_profile(points, nb)));
  }
  emit("profile_total_volume.tsv",
       tsv(total_volume_profile(profile_points(packages_, tape, VolumeSelector::All), nb)));
  emit("profile_time_pdf.tsv", tsv(transaction_time_pdf(packages_, nb)));
  const auto ends = endpoint_time_pdfs(packages_, nb);
  emit("profile_t_ini.tsv", tsv(ends.initial));
  emit("profile_t_fin.tsv", tsv(ends.final));
}

void Run::stage_impact() {
  ensure_packages();
  std::ostringstream bins;
  bins << "level\tcondition\tfilter\tresponse\tbin\tlower\tupper\tx_mean\tR_mean\tR_se\tcount\n";
  json j = json::object();

  const auto want = [&](Condition c) { return !c_.impact_condition || *c_.impact_condition == c; };

  if (c_.impact_level != ImpactLevel::Transaction) {
    PackageImpactReport rep;
    const auto impacts = package_impacts(*all_packages_, &rep);
    std::ostringstream rows;
    write_package_impacts_tsv(rows, impacts);
    emit("package_impacts.tsv", rows.str());
    json series = json::array();
    for (auto cond : {Condition::ExecutionTime, Condition::TotalVolume}) {
      if (!want(cond)) continue;
      for (auto fm : {FmFilter::All, FmFilter::Above08, FmFilter::Below02}) {
        if (c_.impact_fm && *c_.impact_fm != fm) continue;
        ImpactQuery q{cond, fm, c_.investor_type, std::nullopt, false, c_.impact_bins};
        json s = {{"condition", std::string(to_string(cond))}, {"fm", std::string(to_string(fm))}};
        try {
          const auto b = conditional_impact(impacts, q);
          write_bins(bins, "package\t" + std::string(to_string(cond)) + "\t" + std::string(to_string(fm)) + "\tR", b);
          s["anova"] = anova_json(impact_anova(impacts, q));
          if (cond == Condition::TotalVolume) {
            try {
              s["fit"] = impact_fit_json(fit_impact_powerlaw(b));
            } catch (const Error& e) {
              s["fit"] = error_json(e);
            }
          }
        } catch (const Error& e) {
          s["error"] = e.what();
        }
        series.push_back(std::move(s));
      }
    }
    j["package"] = {{"used", rep.used},
                    {"skipped_multi_day", rep.skipped_multi_day},
                    {"skipped_zero_scale", rep.skipped_zero_scale},
                    {"series", std::move(series)}};
  }

  if (c_.impact_level != ImpactLevel::Package) {
    const MarketTape tape(records_);
    TransactionImpactReport rep;
    const auto impacts = transaction_impacts(*all_packages_, tape, &rep);
    std::ostringstream rows;
    write_transaction_impacts_tsv(rows, impacts);
    emit("transaction_impacts.tsv", rows.str());
    json series = json::array();
    for (auto cond : {Condition::DayTime, Condition::TradeVolume}) {
      if (!want(cond)) continue;
      for (auto aggr : {Aggressor::MarketOrder, Aggressor::LimitOrder}) {
        for (bool concurrent : {false, true}) {
          ImpactQuery q{cond, FmFilter::All, c_.investor_type, aggr, concurrent, c_.impact_bins};
          const std::string response = concurrent ? "R_con" : "R_i";
          json s = {{"condition", std::string(to_string(cond))},
                    {"aggressor", aggressor_name(aggr)},
                    {"response", response}};
          try {
            const auto b = conditional_impact(impacts, q);
            write_bins(bins, "transaction\t" + std::string(to_string(cond)) + "\t" + aggressor_name(aggr) + "\t" + response, b);
            s["anova"] = anova_json(impact_anova(impacts, q));
            if (cond == Condition::TradeVolume && !concurrent) {
              try {
                s["fit"] = impact_fit_json(fit_impact_powerlaw(b, c_.trade_volume_floor));
              } catch (const Error& e) {
                s["fit"] = error_json(e);
              }
            }
          } catch (const Error& e) {
            s["error"] = e.what();
          }
          series.push_back(std::move(s));
        }
      }
    }
    j["transaction"] = {{"used", rep.used},
                        {"missing_prior_price", rep.missing_prior_price},
                        {"skipped_multi_day", rep.skipped_multi_day},
                        {"skipped_zero_scale", rep.skipped_zero_scale},
                        {"series", std::move(series)}};
  }
  emit("impact_bins.tsv", bins.str());
  emit_json("impact.json", j);
}

void Run::stage_regress() {
  for (int lag : c_.lags) {
    if (lag < 0) throw Error(ErrorCode::InvalidArgument, "lags must be non-negative");
  }
  ensure_packages();
  TransactionFilter filter{c_.investor_type, c_.regress_aggressor};
  const auto grids = build_second_grids(records_, packages_, filter, c_.jobs);
  json j;
  j["aggressor"] = aggressor_name(c_.regress_aggressor);
  json skipped = json::array();

  if (c_.regress_model != RegressModel::Ar) {
    std::vector<SecondGrid> ok;
    std::vector<std::vector<LagFit>> fits;
    LaggedOptions opt;
    opt.lags = c_.lags;
    for (const auto& g : grids) {
      try {
        fits.push_back(regress_lagged_volume(g, opt));
        ok.push_back(g);
      } catch (const Error& e) {
        skipped.push_back({{"model", "lagged"}, {"stock", g.stock.str()}, {"reason", e.what()}});
      }
    }
    std::ostringstream out;
    write_lagged_tsv(out, ok, fits);
    emit("regress_lagged.tsv", out.str());
  }
  if (c_.regress_model != RegressModel::Lagged) {
    std::vector<SecondGrid> ok;
    std::vector<ArFit> fits;
    ArOptions opt;
    opt.observations = c_.observations;
    for (const auto& g : grids) {
      try {
        fits.push_back(regress_ar_volume(g, opt));
        ok.push_back(g);
        json dropped = json::array();
        for (std::size_t k = 0; k < fits.back().names.size(); ++k) {
          if (fits.back().fit.dropped[k]) dropped.push_back(fits.back().names[k]);
        }
        if (!dropped.empty()) j["dropped_columns"][g.stock.str()] = std::move(dropped);
      } catch (const Error& e) {
        skipped.push_back({{"model", "ar"}, {"stock", g.stock.str()}, {"reason", e.what()}});
      }
    }
    std::ostringstream out;
    write_ar_tsv(out, ok, fits);
    emit("regress_ar.tsv", out.str());
  }
  json scales = json::object();
  for (const auto& g : grids) {
    scales[g.stock.str()] = {{"return_scale", num(g.return_scale)}, {"skipped_days", g.skipped_days}};
  }
  j["grids"] = std::move(scales);
  j["skipped"] = std::move(skipped);
  emit_json("regress.json", j);
}

PipelineOutcome Run::execute() {
  PipelineOutcome outcome;
  json manifest;
  manifest["tool"] = "tradepack";
  manifest["version"] = version();
  manifest["config_hash"] = text::hex64(text::fnv1a64(pipeline_config_to_json(c_, false)));
  json stages = json::array();

  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) {
    outcome.failed_stage = "setup";
    outcome.message = "cannot create " + dir_.string() + ": " + ec.message();
    return outcome;
  }

  const std::vector<std::pair<std::string, std::function<void()>>> table{
      {"summarize", [&] { stage_summarize(); }}, {"detect", [&] { stage_detect(); }},
      {"fit-pdf", [&] { stage_fit(); }},         {"scaling", [&] { stage_scaling(); }},
      {"profile", [&] { stage_profile(); }},     {"impact", [&] { stage_impact(); }},
      {"regress", [&] { stage_regress(); }}};
  for (const auto& s : c_.stages) {
    if (std::none_of(table.begin(), table.end(), [&](const auto& e) { return e.first == s; })) {
      outcome.failed_stage = "setup";
      outcome.message = "unknown stage '" + s + "'";
      return outcome;
    }
  }

  bool failed = false;
  try {
    load();
    std::ostringstream canon;
    write_trade_file(canon, records_);
    manifest["input_checksum"] = text::hex64(text::fnv1a64(canon.str()));
    manifest["input_records"] = records_.size();
  } catch (const std::exception& e) {
    failed = true;
    outcome.failed_stage = "load";
    outcome.message = e.what();
    manifest["load_error"] = e.what();
  }

  for (const auto& [name, fn] : table) {
    if (std::find(c_.stages.begin(), c_.stages.end(), name) == c_.stages.end()) continue;
    json entry = {{"name", name}};
    if (failed) {
      entry["status"] = "skipped";
      stages.push_back(std::move(entry));
      continue;
    }
    stage_outputs_ = json::object();
    try {
      fn();
      entry["status"] = "ok";
    } catch (const std::exception& e) {
      failed = true;
      entry["status"] = "failed";
      entry["error"] = e.what();
      outcome.failed_stage = name;
      outcome.message = e.what();
    }
    entry["outputs"] = stage_outputs_;
    stages.push_back(std::move(entry));
  }
  manifest["stages"] = std::move(stages);
  manifest["complete"] = !failed;

  const fs::path path = dir_ / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  out << manifest.dump(2) << "\n";
  outcome.manifest_path = path.string();
  if (!out) {
    outcome.failed_stage = "manifest";
    outcome.message = "cannot write " + path.string();
    return outcome;
  }
  outcome.ok = !failed;
  return outcome;
}

}  // namespace

PipelineConfig pipeline_config_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    static const std::vector<std::string> known{
        "input",         "metadata",    "synth",          "seed",          "parse_mode",
        "investor_type", "detector",    "fit",            "scaling",       "profile",
        "impact",        "regress",     "jobs",           "out_dir",       "stages"};
    for (const auto& item : j.items()) {
      if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
        throw Error(ErrorCode::InvalidArgument, "unknown key '" + item.key() + "' in pipeline config");
      }
    }
    PipelineConfig c;
    c.input = j.value("input", std::string{});
    c.metadata = j.value("metadata", std::string{});
    if (j.contains("synth")) c.synth = synth::config_from_json(j["synth"].dump());
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    const auto mode = j.value("parse_mode", std::string("strict"));
    if (mode != "strict" && mode != "lenient") throw Error(ErrorCode::InvalidArgument, "parse_mode must be strict or lenient");
    c.parse_mode = mode == "strict" ? ParseMode::Strict : ParseMode::Lenient;
    c.investor_type = investor_type_from(j.value("investor_type", std::string("all")));
    if (j.contains("detector")) {
      const auto& d = j["detector"];
      c.detector.break_days = d.value("break_days", c.detector.break_days);
      c.detector.theta = d.value("theta", c.detector.theta);
      c.detector.min_market_trades = d.value("min_market_trades", c.detector.min_market_trades);
      c.detector.one_day_only = d.value("one_day_only", c.detector.one_day_only);
    }
    c.detector.validate();
    if (j.contains("fit")) {
      const auto& f = j["fit"];
      c.fit_vars = f.value("vars", c.fit_vars);
      if (f.contains("regime")) {
        c.fit_regime = level_from<powerlaw::Regime>(
            f["regime"].get<std::string>(),
            {{"bounded", powerlaw::Regime::BoundedGeneral}, {"tail", powerlaw::Regime::UnboundedTail}},
            "regime");
      }
      c.fit_max_candidates = f.value("max_candidates", c.fit_max_candidates);
    }
    if (j.contains("scaling")) {
      const auto& s = j["scaling"];
      c.scaling.n_bins = s.value("bins", c.scaling.n_bins);
      c.scaling.window.top_fraction = s.value("window_top_frac", c.scaling.window.top_fraction);
    }
    if (j.contains("profile")) c.profile_bins = j["profile"].value("bins", c.profile_bins);
    if (j.contains("impact")) {
      const auto& i = j["impact"];
      c.impact_level = level_from<ImpactLevel>(
          i.value("level", std::string("both")),
          {{"package", ImpactLevel::Package}, {"transaction", ImpactLevel::Transaction}, {"both", ImpactLevel::Both}},
          "impact level");
      if (i.contains("condition")) c.impact_condition = condition_from(i["condition"].get<std::string>());
      if (i.contains("fm")) c.impact_fm = fm_from(i["fm"].get<std::string>());
      c.impact_bins = i.value("bins", c.impact_bins);
      c.trade_volume_floor = i.value("trade_volume_floor", c.trade_volume_floor);
    }
    if (j.contains("regress")) {
      const auto& r = j["regress"];
      c.regress_model = level_from<RegressModel>(
          r.value("model", std::string("both")),
          {{"lagged", RegressModel::Lagged}, {"ar", RegressModel::Ar}, {"both", RegressModel::Both}}, "model");
      c.lags = r.value("lags", c.lags);
      c.regress_aggressor = aggressor_from(r.value("aggressor", std::string("market")));
      c.observations = level_from<ObservationSet>(
          r.value("observations", std::string("package")),
          {{"package", ObservationSet::PackageSeconds}, {"all", ObservationSet::AllSeconds}}, "observations");
    }
    c.jobs = j.value("jobs", c.jobs);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.stages = j.value("stages", c.stages);
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("json: ") + e.what());
  }
}

std::string pipeline_config_to_json(const PipelineConfig& c, bool include_runtime) {
  json j;
  j["input"] = c.input;
  j["metadata"] = c.metadata;
  if (c.synth) j["synth"] = json::parse(synth::config_to_json(*c.synth));
  if (c.seed) j["seed"] = *c.seed;
  j["parse_mode"] = c.parse_mode == ParseMode::Strict ? "strict" : "lenient";
  j["investor_type"] = investor_type_name(c.investor_type);
  j["detector"] = {{"break_days", c.detector.break_days},
                   {"theta", c.detector.theta},
                   {"min_market_trades", c.detector.min_market_trades},
                   {"one_day_only", c.detector.one_day_only}};
  j["fit"] = {{"vars", c.fit_vars}, {"max_candidates", c.fit_max_candidates}};
  if (c.fit_regime) {
    j["fit"]["regime"] = *c.fit_regime == powerlaw::Regime::BoundedGeneral ? "bounded" : "tail";
  }
  j["scaling"] = {{"bins", c.scaling.n_bins}, {"window_top_frac", c.scaling.window.top_fraction}};
  j["profile"] = {{"bins", c.profile_bins}};
  j["impact"] = {{"level", level_name(c.impact_level)},
                 {"bins", c.impact_bins},
                 {"trade_volume_floor", c.trade_volume_floor}};
  if (c.impact_condition) j["impact"]["condition"] = std::string(to_string(*c.impact_condition));
  if (c.impact_fm) j["impact"]["fm"] = std::string(to_string(*c.impact_fm));
  j["regress"] = {{"model", model_name(c.regress_model)},
                  {"lags", c.lags},
                  {"aggressor", aggressor_name(c.regress_aggressor)},
                  {"observations", c.observations == ObservationSet::PackageSeconds ? "package" : "all"}};
  j["stages"] = c.stages;
  if (include_runtime) {
    j["jobs"] = c.jobs;
    j["out_dir"] = c.out_dir;
  }
  return j.dump(2) + "\n";
}

PipelineOutcome run_pipeline(const PipelineConfig& config) { return Run(config).execute(); }

}  // namespace tradepack
