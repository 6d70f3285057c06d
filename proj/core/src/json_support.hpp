#pragma once

#include <string_view>

#include "json.hpp"
#include "vucrl/mdp.hpp"

// Internal JSON helpers shared by the serializers.
namespace vucrl {

nlohmann::json parse_json_text(std::string_view text);
nlohmann::json mdp_to_json_value(const StationaryMdp& mdp);
StationaryMdp mdp_from_json_value(const nlohmann::json& doc);

}  // namespace vucrl
