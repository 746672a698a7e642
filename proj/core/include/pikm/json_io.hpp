#pragma once

#include <json.hpp>

#include "pikm/baselines.hpp"
#include "pikm/model.hpp"
#include "pikm/optimizer.hpp"
#include "pikm/simulator.hpp"

namespace pikm {

/// Wire schema: every duration is an integer nanosecond count under a
/// *_ns key; a switched-off interval is JSON null. Round-trips are
/// bit-identical because nothing ever passes through floating point.
void to_json(nlohmann::json& j, const PiConfig& cfg);
void from_json(const nlohmann::json& j, PiConfig& cfg);

void to_json(nlohmann::json& j, const RadioParams& radio);
void from_json(const nlohmann::json& j, RadioParams& radio);

void to_json(nlohmann::json& j, const SlottedSpec& spec);
void from_json(const nlohmann::json& j, SlottedSpec& spec);

void to_json(nlohmann::json& j, const VariantSolution& sol);

void to_json(nlohmann::json& j, const SimOutcome& outcome);

}  // namespace pikm
