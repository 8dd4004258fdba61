#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tradepack/detect.hpp"
#include "tradepack/impact.hpp"
#include "tradepack/powerlaw.hpp"
#include "tradepack/regress.hpp"
#include "tradepack/scaling.hpp"
#include "tradepack/synth.hpp"

namespace tradepack {

inline const std::vector<std::string> kAllStages{"summarize", "detect",  "fit-pdf", "scaling",
                                                 "profile",   "impact",  "regress"};

enum class ImpactLevel { Package, Transaction, Both };
enum class RegressModel { Lagged, Ar, Both };

struct PipelineConfig {
  std::string input;                       // trade CSV; empty means generate from `synth`
  std::string metadata;                    // optional stock metadata TSV
  std::optional<synth::SynthConfig> synth;
  std::optional<std::uint64_t> seed;       // overrides synth.seed
  ParseMode parse_mode = ParseMode::Strict;
  std::optional<InvestorType> investor_type;
  DetectorConfig detector;

  std::vector<std::string> fit_vars{"T", "N", "V"};
  std::optional<powerlaw::Regime> fit_regime;  // default: T bounded, N and V tail
  std::size_t fit_max_candidates = 1000;

  ScalingOptions scaling;
  std::size_t profile_bins = 48;

  ImpactLevel impact_level = ImpactLevel::Both;
  std::optional<Condition> impact_condition;
  std::optional<FmFilter> impact_fm;
  std::size_t impact_bins = 20;
  double trade_volume_floor = 1000.0;

  RegressModel regress_model = RegressModel::Both;
  std::vector<int> lags = kDefaultLags;
  std::optional<Aggressor> regress_aggressor = Aggressor::MarketOrder;
  ObservationSet observations = ObservationSet::PackageSeconds;

  int jobs = 1;
  std::string out_dir = "out";
  std::vector<std::string> stages = kAllStages;
};

PipelineConfig pipeline_config_from_json(std::string_view json);
/// Canonical JSON; `include_runtime` adds out_dir and jobs, which do not
/// change results and are left out of the config hash.
std::string pipeline_config_to_json(const PipelineConfig& config, bool include_runtime = true);

struct PipelineOutcome {
  bool ok = false;
  std::string failed_stage;
  std::string message;
  std::string manifest_path;
};

/// Runs the requested stages in order, writing outputs and manifest.json into
/// out_dir. A failing stage stops the run; the manifest then marks it failed,
/// later stages skipped and the run incomplete.
PipelineOutcome run_pipeline(const PipelineConfig& config);

std::string version();

}  // namespace tradepack
