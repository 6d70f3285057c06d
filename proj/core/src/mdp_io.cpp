#include <string>

#include "json.hpp"
#include "json_support.hpp"
#include "vucrl/errors.hpp"
#include "vucrl/mdp.hpp"

namespace vucrl {

nlohmann::json mdp_to_json_value(const StationaryMdp& mdp) {
  nlohmann::json doc;
  doc["n_states"] = mdp.n_states();
  doc["n_actions"] = mdp.n_actions();
  doc["mean_reward"] = mdp.rewards();
  doc["transition"] = mdp.transitions();
  return doc;
}

StationaryMdp mdp_from_json_value(const nlohmann::json& doc) {
  try {
    return StationaryMdp(doc.at("n_states").get<std::size_t>(),
                         doc.at("n_actions").get<std::size_t>(),
                         doc.at("mean_reward").get<std::vector<double>>(),
                         doc.at("transition").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed MDP document: ") + e.what());
  }
}

std::string to_json(const StationaryMdp& mdp) { return mdp_to_json_value(mdp).dump(2); }

StationaryMdp stationary_mdp_from_json(std::string_view text) {
  return mdp_from_json_value(parse_json_text(text));
}

nlohmann::json parse_json_text(std::string_view text) {
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace vucrl
