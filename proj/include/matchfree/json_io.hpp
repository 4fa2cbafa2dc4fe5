#pragma once

// JSON views of every report. Rationals are "p/q" strings, sets are arrays
// of elements, and each document carries a "schema" tag.

#include "matchfree/averaging.hpp"
#include "matchfree/config.hpp"
#include "matchfree/discharge.hpp"
#include "matchfree/formulas.hpp"
#include "matchfree/inequalities.hpp"
#include "matchfree/solver.hpp"

#include <json.hpp>

namespace matchfree {

using Json = nlohmann::ordered_json;

Json set_json(ElementSet set);
ElementSet set_from_json(const Json& j);
Json family_json(const SetFamily& fam);
SetFamily family_from_json(const Json& j);

Json to_json(const ExtremalValue& v);
Json to_json(const FamilyReport& r);
/// The witness is included only when include_witness is set.
Json to_json(const SolveResult& r, bool include_witness = false);
Json to_json(const WeightedConfig& config);
Json to_json(const LayerSumReport& r);
Json to_json(const CatalogReport& r);
Json to_json(const std::vector<WeightType>& types);
Json to_json(const DischargeReport& r);
Json to_json(const std::vector<InequalityRecord>& records);
Json to_json(const AveragingReport& r);

/// Parses a report written by one of the to_json overloads: checks the
/// schema tag and that every rational field re-parses. Returns the schema.
std::string validate_report(const Json& j);

}  // namespace matchfree
