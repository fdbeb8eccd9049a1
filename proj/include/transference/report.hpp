#pragma once

#include <nlohmann/json.hpp>

#include "transference/ap_count.hpp"
#include "transference/dense_model.hpp"
#include "transference/discrepancy.hpp"
#include "transference/linear_forms.hpp"
#include "transference/residue.hpp"

namespace transference {

nlohmann::json to_json(const Group& group);
nlohmann::json to_json(const LfcReport& report);
nlohmann::json to_json(const LfcSweep& sweep);
nlohmann::json to_json(const ApDensity& density);
nlohmann::json to_json(const TestFamily& family);
nlohmann::json to_json(const DiscrepancyReport& report, bool include_witness = true);
nlohmann::json to_json(const BoxNormBound& bound);
/// Audit trail of a dense model run; the model values themselves are stored
/// separately as a weight file.
nlohmann::json to_json(const DenseModelResult& result);

TestFamily test_family_from_json(const nlohmann::json& doc);

}  // namespace transference
