#include "transference/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "transference/errors.hpp"
#include "transference/report.hpp"
#include "transference/rng.hpp"

namespace transference {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Stage seeds are derived from the config seed by a fixed stream id each.
enum SeedStream : std::uint64_t {
  kSeedLfc = 2,
  kSeedBox = 3,
  kSeedNuSearch = 4,
  kSeedModel = 5,
  kSeedVerify = 6,
};

LfcMode resolve_lfc_mode(const PipelineConfig& cfg, const Group& group) {
  if (cfg.lfc_mode == "exact") return LfcMode::exact;
  if (cfg.lfc_mode == "monte_carlo") return LfcMode::monte_carlo;
  return lfc_exact_cost(group) <= 1e7 ? LfcMode::exact : LfcMode::monte_carlo;
}

template <class Fn>
auto run_stage(const char* name, std::vector<StageTiming>& timing, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  auto record = [&] {
    const std::chrono::duration<double> spent = std::chrono::steady_clock::now() - start;
    timing.push_back({name, spent.count()});
  };
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record();
    } else {
      auto result = fn();
      record();
      return result;
    }
  } catch (const PreconditionError& e) {
    throw PreconditionError(std::string(name) + ": " + e.what());
  } catch (const StageError& e) {
    throw StageError(std::string(name) + ": " + e.what());
  } catch (const std::exception& e) {
    throw StageError(std::string(name) + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw StageError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw StageError("failed writing " + path.string());
}

}  // namespace

void PipelineConfig::validate() const {
  const Group group = Group::make(N, k);
  parse_generator_kind(generator);
  parse_file_format(format);
  if (lfc_mode != "auto" && lfc_mode != "exact" && lfc_mode != "monte_carlo") {
    throw PreconditionError("lfc_mode must be auto, exact or monte_carlo");
  }
  if (!(p > 0.0 && p <= 1.0)) throw PreconditionError("p must lie in (0, 1]");
  if (p * static_cast<double>(N) < 1.0) throw PreconditionError("p * N must be at least 1");
  if (!(delta >= 0.0 && delta <= 1.0)) throw PreconditionError("delta must lie in [0, 1]");
  if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
  if (samples == 0) throw PreconditionError("samples must be positive");
  if (patterns == 0) throw PreconditionError("patterns must be positive");
  if (restarts == 0) throw PreconditionError("restarts must be positive");
  if (output_dir.empty()) throw PreconditionError("output_dir is empty");
  if (lfc_mode == "exact" && lfc_exact_cost(group) > kDefaultExactBudget) {
    throw BudgetExceeded(lfc_exact_cost(group), kDefaultExactBudget);
  }
}

json to_json(const PipelineConfig& cfg) {
  return {{"N", cfg.N},
          {"k", cfg.k},
          {"generator", cfg.generator},
          {"p", cfg.p},
          {"delta", cfg.delta},
          {"epsilon", cfg.epsilon},
          {"samples", cfg.samples},
          {"patterns", cfg.patterns},
          {"restarts", cfg.restarts},
          {"max_iters", cfg.max_iters},
          {"seed", cfg.seed},
          {"lfc_mode", cfg.lfc_mode},
          {"output_dir", cfg.output_dir},
          {"format", cfg.format}};
}

PipelineConfig pipeline_config_from_json(const json& doc) {
  if (!doc.is_object()) throw PreconditionError("pipeline config must be a JSON object");
  PipelineConfig cfg;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "N") cfg.N = value.get<std::uint64_t>();
      else if (key == "k") cfg.k = value.get<int>();
      else if (key == "generator") cfg.generator = value.get<std::string>();
      else if (key == "p") cfg.p = value.get<double>();
      else if (key == "delta") cfg.delta = value.get<double>();
      else if (key == "epsilon") cfg.epsilon = value.get<double>();
      else if (key == "samples") cfg.samples = value.get<std::uint64_t>();
      else if (key == "patterns") cfg.patterns = value.get<std::size_t>();
      else if (key == "restarts") cfg.restarts = value.get<std::uint64_t>();
      else if (key == "max_iters") cfg.max_iters = value.get<std::size_t>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "lfc_mode") cfg.lfc_mode = value.get<std::string>();
      else if (key == "output_dir") cfg.output_dir = value.get<std::string>();
      else if (key == "format") cfg.format = value.get<std::string>();
      else throw PreconditionError("unknown config key: " + key);
    }
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("malformed pipeline config: ") + e.what());
  }
  return cfg;
}

json to_json(const PipelineReport& report, bool include_timing) {
  json box = json::array();
  for (const auto& b : report.box_norm) box.push_back(to_json(b));
  json verification = json::array();
  for (const auto& v : report.verification) verification.push_back(to_json(v, false));

  json doc = {
      {"config", to_json(report.config)},
      {"lfc",
       {{"worst_deviation", report.lfc_worst_deviation},
        {"worst_pattern", report.lfc.reports.empty()
                              ? std::string()
                              : report.lfc.reports[report.lfc.worst_index].pattern.to_string()},
        {"max_standard_error", report.lfc.max_standard_error},
        {"patterns", report.lfc.reports.size()},
        {"mode", report.lfc.reports.empty()
                     ? std::string()
                     : std::string(to_string(report.lfc.reports.front().mode))}}},
      {"box_norm", std::move(box)},
      {"nu_discrepancy", to_json(report.nu_discrepancy, false)},
      {"transport_error", report.transport_error},
      {"mean_f_raw", report.mean_f_raw},
      {"rescaled", report.rescaled},
      {"dense_model", to_json(report.model)},
      {"verification", std::move(verification)},
      {"verification_max", report.verification_max},
      {"lambda_f", report.lambda_f},
      {"lambda_model", report.lambda_model},
      {"ap_gap", report.ap_gap},
      {"seeds", report.seeds},
      {"artifacts", report.artifacts},
  };
  if (include_timing) {
    json timing = json::object();
    for (const auto& t : report.timing) timing[t.stage] = t.seconds;
    doc["timing"] = std::move(timing);
  }
  return doc;
}

double compare_baseline(const WeightFn& model, int k) {
  for (std::size_t x = 0; x < model.size(); ++x) {
    if (!(model[x] >= 0.0 && model[x] <= 1.0)) {
      throw RangeViolation("value at " + std::to_string(x) + " is outside [0, 1]");
    }
  }
  return ap_density_direct(model, k).value;
}

PipelineReport run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  const Group group = Group::make(cfg.N, cfg.k);
  const FileFormat format = parse_file_format(cfg.format);
  const std::string ext = format == FileFormat::json ? ".json" : ".csv";
  const fs::path out_dir(cfg.output_dir);

  PipelineReport report;
  report.config = cfg;
  report.seeds = {{"generate", cfg.seed},
                  {"lfc", derive_seed(cfg.seed, kSeedLfc)},
                  {"box_norm", derive_seed(cfg.seed, kSeedBox)},
                  {"nu_search", derive_seed(cfg.seed, kSeedNuSearch)},
                  {"dense_model", derive_seed(cfg.seed, kSeedModel)},
                  {"verify", derive_seed(cfg.seed, kSeedVerify)}};
  auto& timing = report.timing;

  GeneratedPair pair = run_stage("generate", timing, [&] {
    GeneratorSpec spec;
    spec.kind = parse_generator_kind(cfg.generator);
    spec.density = cfg.p;
    spec.planted_fraction = cfg.delta;
    spec.seed = cfg.seed;
    return generate(group, spec);
  });

  report.lfc = run_stage("lfc", timing, [&] {
    return lfc_sweep(pair.nu, cfg.patterns, cfg.samples, report.seeds["lfc"],
                     resolve_lfc_mode(cfg, group));
  });
  report.lfc_worst_deviation = report.lfc.worst_deviation;

  const std::vector<LinearForm> forms = all_forms(group);
  const WeightFn one = WeightFn::constant(group, 1.0);
  run_stage("discrepancy_pair", timing, [&] {
    for (const LinearForm& form : forms) {
      report.box_norm.push_back(box_norm_bound(pair.nu, form, kDefaultBoundBudget,
                                               cfg.samples, report.seeds["box_norm"]));
    }
    SearchOptions search;
    search.restarts = cfg.restarts;
    search.seed = report.seeds["nu_search"];
    search.epsilon_target = cfg.epsilon;
    report.nu_discrepancy = discrepancy_search(pair.nu, one, forms.front(), search);
    const double base = report.nu_discrepancy.signed_value;
    for (const LinearForm& form : forms) {
      const TestFamily moved =
          transport_witness(*report.nu_discrepancy.witness, 1, form.omitted_index(), group);
      const double value = discrepancy_signed(pair.nu, one, form, moved);
      report.transport_error = std::max(report.transport_error, std::abs(value - base));
    }
  });

  report.mean_f_raw = mean(pair.f);
  const WeightFn f = run_stage("rescale", timing, [&] {
    return rescale_to_unit_mass(pair.f, std::min(1.0, cfg.delta > 0.0 ? cfg.delta : 1.0));
  });
  report.rescaled = !std::equal(f.values().begin(), f.values().end(), pair.f.values().begin());

  report.model = run_stage("dense_model", timing, [&] {
    DenseModelOptions options;
    options.epsilon = cfg.epsilon;
    options.restarts = cfg.restarts;
    options.max_iters = cfg.max_iters;
    options.seed = report.seeds["dense_model"];
    try {
      return extract_dense_model(f, pair.nu, forms.front(), options);
    } catch (const NoConvergence& e) {
      return e.result();
    }
  });
  const WeightFn& model = report.model.model;

  report.verification = run_stage("verify", timing, [&] {
    return verify_model(f, model, group, cfg.epsilon, cfg.restarts, report.seeds["verify"]);
  });
  for (const auto& v : report.verification) {
    report.verification_max = std::max(report.verification_max, v.value);
  }

  run_stage("count", timing, [&] {
    report.lambda_f = ap_density_direct(f, cfg.k).value;
    report.lambda_model = compare_baseline(model, cfg.k);
    report.ap_gap = std::abs(report.lambda_f - report.lambda_model);
  });

  run_stage("persist", timing, [&] {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw StageError("cannot create " + out_dir.string() + ": " + ec.message());
    report.artifacts = {{"nu", "nu" + ext},
                        {"f", "f" + ext},
                        {"fmodel", "fmodel" + ext},
                        {"lfc", "lfc.json"},
                        {"witnesses", "witnesses.json"},
                        {"report", "report.json"}};
    if (report.rescaled) report.artifacts["f_generated"] = "f_generated" + ext;
    write_weight_file(out_dir / report.artifacts["nu"], pair.nu, format);
    write_weight_file(out_dir / report.artifacts["f"], f, format);
    write_weight_file(out_dir / report.artifacts["fmodel"], model, format);
    if (report.rescaled) {
      write_weight_file(out_dir / report.artifacts["f_generated"], pair.f, format);
    }
    write_json(out_dir / report.artifacts["lfc"], to_json(report.lfc));
    json witnesses = {{"nu_discrepancy", to_json(report.nu_discrepancy)}};
    json verify = json::array();
    for (const auto& v : report.verification) verify.push_back(to_json(v));
    witnesses["verification"] = std::move(verify);
    write_json(out_dir / report.artifacts["witnesses"], witnesses);
  });
  write_json(out_dir / report.artifacts["report"], to_json(report));
  return report;
}

}  // namespace transference
