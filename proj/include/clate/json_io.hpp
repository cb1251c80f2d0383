#pragma once

#include "clate/model.hpp"
#include "clate/ordered.hpp"
#include "clate/representation.hpp"
#include "clate/simulate.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace clate {

using Json = nlohmann::json;

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string dump_canonical(const Json& j);

std::string sha256_hex(std::string_view bytes);

/// Factored model document: z_support, x_support, y_support, pzx, types_given_x
/// and K for ordered treatments. Probabilities are "num/den" strings.
Json model_to_json(const FiniteModel& model);
/// Accepts the factored document or a raw joint document (a `joint` list of
/// {x, z, treatment_map, outcomes, prob}); raw joints are factored and must
/// satisfy conditional independence. Throws ModelError on invalid input.
FiniteModel model_from_json(const Json& j);
/// Either document form as an unfactored law.
JointLaw joint_from_json(const Json& j);
Json joint_to_json(const JointLaw& joint);
bool is_ordered_document(const Json& j);

Json representation_to_json(const IndexRepresentation& rep, const FiniteModel& model);
IndexRepresentation representation_from_json(const Json& j, const FiniteModel& model);

Json thresholds_to_json(const ThresholdRepresentation& rep, const FiniteModel& model);
ThresholdRepresentation thresholds_from_json(const Json& j, const FiniteModel& model);

Json dgp_spec_to_json(const DgpSpec& spec);
DgpSpec dgp_spec_from_json(const Json& j);

}  // namespace clate
