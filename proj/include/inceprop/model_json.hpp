#pragma once

#include <json.hpp>

#include "inceprop/json_reader.hpp"
#include "inceprop/oscillator_models.hpp"

namespace inceprop {

// {"model": "dpo"|"raiford"|"generic", "m", "omega", "lambda", "hbar",
//  "pump": {...}} for the physical models; generic models take "a".."d",
// each a number or {"offset", "terms": [{"amplitude","frequency","phase"}]}.

CoefficientModel model_from_json(const nlohmann::json& doc,
                                 const std::string& path = "model");
CoefficientModel model_from_json(JsonObjectReader& reader);

/// Throws InvalidArgument for generic models built from raw callables.
nlohmann::json model_to_json(const CoefficientModel& model);

}  // namespace inceprop
