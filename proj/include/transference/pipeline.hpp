#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "transference/ap_count.hpp"
#include "transference/dense_model.hpp"
#include "transference/discrepancy.hpp"
#include "transference/linear_forms.hpp"
#include "transference/weightfn.hpp"

namespace transference {

struct PipelineConfig {
  std::uint64_t N = 3001;
  int k = 3;
  std::string generator = "random_sparse";
  double p = 0.3;
  double delta = 0.5;
  double epsilon = 0.05;
  std::uint64_t samples = 100000;
  std::size_t patterns = 16;
  std::uint64_t restarts = 8;
  std::size_t max_iters = 500;
  std::uint64_t seed = 7;
  /// "auto", "exact" or "monte_carlo". auto picks exact when it is cheap.
  std::string lfc_mode = "auto";
  std::string output_dir = "pipeline_out";
  std::string format = "json";

  /// Throws PreconditionError (or a subclass) on the first violated check.
  void validate() const;
};

nlohmann::json to_json(const PipelineConfig& cfg);
/// Missing keys keep their defaults; unknown keys are rejected.
PipelineConfig pipeline_config_from_json(const nlohmann::json& doc);

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct PipelineReport {
  PipelineConfig config;

  LfcSweep lfc;
  double lfc_worst_deviation = 0.0;

  std::vector<BoxNormBound> box_norm;  // one per psi_j
  DiscrepancyReport nu_discrepancy;    // searched (nu, 1) under psi_1
  /// Largest |value under psi_j of the transported witness - value under psi_1|.
  double transport_error = 0.0;

  double mean_f_raw = 0.0;
  bool rescaled = false;

  /// Replaced by the dense model stage.
  DenseModelResult model{WeightFn::constant(Group::make(1, 3), 0.0, WeightTag::fmodel)};
  std::vector<DiscrepancyReport> verification;
  double verification_max = 0.0;

  double lambda_f = 0.0;
  double lambda_model = 0.0;
  double ap_gap = 0.0;

  std::map<std::string, std::uint64_t> seeds;
  std::map<std::string, std::string> artifacts;  // name -> file name in output_dir
  std::vector<StageTiming> timing;
};

/// Timing is kept under its own "timing" key so it can be dropped for replay
/// comparisons.
nlohmann::json to_json(const PipelineReport& report, bool include_timing = true);

/// Runs the eight stages in order and writes every intermediate weight file
/// plus report.json into cfg.output_dir. Poor metrics never abort the run;
/// errors carry the stage name.
PipelineReport run_pipeline(const PipelineConfig& cfg);

/// Lambda_k of a function already in [0, 1]. Throws RangeViolation otherwise.
double compare_baseline(const WeightFn& model, int k);

}  // namespace transference
