#pragma once

#include <json.hpp>

#include "rev/mech.hpp"

namespace rev {

struct Instance {
  ProductPrior prior;
  Valuation val;
};

nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

nlohmann::json mechanism_to_json(const Mechanism& mech);
Mechanism mechanism_from_json(const nlohmann::json& j);
Mechanism load_mechanism(const std::string& path);
void save_mechanism(const Mechanism& mech, const std::string& path);

nlohmann::json load_json(const std::string& path);
void save_json(const nlohmann::json& j, const std::string& path);

}  // namespace rev
