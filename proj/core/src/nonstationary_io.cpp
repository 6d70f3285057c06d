#include <string>

#include "json_support.hpp"
#include "vucrl/errors.hpp"
#include "vucrl/nonstationary.hpp"

namespace vucrl {

namespace {
constexpr const char* kEnvironmentFormat = "vucrl-environment";
}

std::string to_json(const NonstationaryMdp& env) {
  nlohmann::json doc;
  doc["format"] = kEnvironmentFormat;
  doc["version"] = 1;
  doc["provenance"] = {{"generator", env.provenance().generator},
                       {"seed", env.provenance().seed},
                       {"parameters", env.provenance().parameters}};
  doc["horizon"] = env.horizon();
  doc["initial_state"] = env.initial_state();
  doc["interpolation"] = std::string(to_string(env.interpolation()));
  auto& list = doc["breakpoints"] = nlohmann::json::array();
  for (const auto& bp : env.breakpoints()) {
    list.push_back({{"start_step", bp.start_step}, {"mdp", mdp_to_json_value(bp.mdp)}});
  }
  return doc.dump(2);
}

NonstationaryMdp nonstationary_mdp_from_json(std::string_view text) {
  const auto doc = parse_json_text(text);
  try {
    if (doc.at("format").get<std::string>() != kEnvironmentFormat) {
      throw FormatError("not an environment document");
    }
    Provenance provenance;
    if (doc.contains("provenance")) {
      const auto& p = doc.at("provenance");
      provenance.generator = p.value("generator", std::string{});
      provenance.seed = p.value("seed", std::uint64_t{0});
      if (p.contains("parameters")) {
        provenance.parameters = p.at("parameters").get<std::map<std::string, double>>();
      }
    }
    std::vector<Breakpoint> breakpoints;
    for (const auto& bp : doc.at("breakpoints")) {
      breakpoints.push_back({bp.at("start_step").get<std::size_t>(), mdp_from_json_value(bp.at("mdp"))});
    }
    return NonstationaryMdp(doc.at("horizon").get<std::size_t>(), std::move(breakpoints),
                            interpolation_from_string(doc.at("interpolation").get<std::string>()),
                            doc.at("initial_state").get<std::size_t>(), std::move(provenance));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed environment document: ") + e.what());
  }
}

}  // namespace vucrl
