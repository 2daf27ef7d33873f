#ifndef SCENRED_JSON_IO_HPP
#define SCENRED_JSON_IO_HPP

#include <filesystem>

#include "json.hpp"
#include "scenred/approximation.hpp"
#include "scenred/core.hpp"
#include "scenred/experiments.hpp"
#include "scenred/reduction.hpp"

namespace scenred {

using Json = nlohmann::json;

// Instance file: a scenario set {"dim", "scenarios", "labels"?} merged with
// a family object, one of
//   {"family": "selection", "n": 8, "p": 3}
//   {"family": "layered_sp", "L": 2, "W": 2}
//   {"family": "custom", "A": [[...]], "B": [[...]], "b": [...], "integral": true}

Json to_json(const ScenarioSet& u);
ScenarioSet scenario_set_from_json(const Json& j);

Json to_json(const FamilySpec& f);
FamilySpec family_from_json(const Json& j);

/// Family descriptions serialize as their tag; custom ones as matrices.
Json to_json(const FeasibleSetDescription& x);
FeasibleSetDescription description_from_json(const Json& j);

Json to_json(const ReductionResult& r);
Json to_json(const ApproximationResult& r);
Json to_json(const ReductionRecord& r);
Json to_json(const ApproximationRecord& r);
ReductionRecord reduction_record_from_json(const Json& j);
ApproximationRecord approximation_record_from_json(const Json& j);

/// Throws IoError on unreadable or malformed files.
Json read_json_file(const std::filesystem::path& p);
void write_json_file(const std::filesystem::path& p, const Json& j);

}  // namespace scenred

#endif  // SCENRED_JSON_IO_HPP
