#include "transference/report.hpp"

#include "transference/errors.hpp"

namespace transference {

using nlohmann::json;

json to_json(const Group& group) {
  return {{"N", group.modulus()}, {"k", group.ap_length()}};
}

json to_json(const LfcReport& report) {
  return {{"pattern", report.pattern.to_string()},
          {"estimate", report.estimate},
          {"deviation", report.deviation()},
          {"standard_error", report.standard_error},
          {"sample_count", report.sample_count},
          {"mode", std::string(to_string(report.mode))},
          {"seed", report.seed}};
}

json to_json(const LfcSweep& sweep) {
  json reports = json::array();
  for (const auto& r : sweep.reports) reports.push_back(to_json(r));
  return {{"worst_deviation", sweep.worst_deviation},
          {"worst_index", sweep.worst_index},
          {"max_standard_error", sweep.max_standard_error},
          {"reports", std::move(reports)}};
}

json to_json(const ApDensity& density) {
  return {{"value", density.value},
          {"k", density.k},
          {"N", density.modulus},
          {"method", std::string(to_string(density.method))}};
}

json to_json(const TestFamily& family) {
  return {{"r", family.arity()}, {"N", family.modulus()}, {"u", family.functions()}};
}

TestFamily test_family_from_json(const json& doc) {
  try {
    return {doc.at("r").get<std::size_t>(), doc.at("N").get<std::uint64_t>(),
            doc.at("u").get<std::vector<std::vector<double>>>()};
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("malformed test family: ") + e.what());
  }
}

json to_json(const DiscrepancyReport& report, bool include_witness) {
  json doc = {{"value", report.value},
              {"signed_value", report.signed_value},
              {"epsilon_target", report.epsilon_target},
              {"j", report.form_index},
              {"mode", std::string(to_string(report.mode))},
              {"restarts", report.restarts},
              {"seed", report.seed},
              {"best_restart", report.best_restart}};
  if (include_witness && report.witness) doc["witness"] = to_json(*report.witness);
  return doc;
}

json to_json(const BoxNormBound& bound) {
  return {{"value", bound.value},
          {"raw", bound.raw},
          {"standard_error", bound.standard_error},
          {"mode", std::string(to_string(bound.mode))},
          {"samples", bound.samples},
          {"j", bound.form_index}};
}

json to_json(const DenseModelResult& result) {
  json log = json::array();
  for (const auto& step : result.log) {
    log.push_back({{"iteration", step.iteration},
                   {"search_value", step.search_value},
                   {"direction", step.direction},
                   {"step_size", step.step_size}});
  }
  return {{"iterations", result.iterations},
          {"final_gap", result.final_gap},
          {"epsilon_target", result.epsilon_target},
          {"converged", result.converged},
          {"window_regression", result.window_regression},
          {"mean_f", result.mean_f},
          {"mean_model", result.mean_model},
          {"distinguisher_log", std::move(log)}};
}

}  // namespace transference
