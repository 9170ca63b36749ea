#pragma once

#include <json.hpp>

#include "kcgg/airhockey.hpp"
#include "kcgg/kinematics.hpp"

namespace kcgg {

// nlohmann ADL serializers for the spec types that appear in config files
// and binary-file headers.

void to_json(nlohmann::json& j, const ArmSpec& a);
void from_json(const nlohmann::json& j, ArmSpec& a);

void to_json(nlohmann::json& j, const TableSpec& t);
void from_json(const nlohmann::json& j, TableSpec& t);

void to_json(nlohmann::json& j, const LaunchParams& l);
void from_json(const nlohmann::json& j, LaunchParams& l);

void to_json(nlohmann::json& j, const EpisodeParams& e);
void from_json(const nlohmann::json& j, EpisodeParams& e);

} // namespace kcgg
