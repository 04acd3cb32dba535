#pragma once

#include <string>

#include "yslot/net_model.hpp"

namespace fixtures {

inline yslot::Topology example(int loss_case = 1, int cycle = 30) {
  const auto path = std::string(YSLOT_DATA_DIR) + "/example8_case" + std::to_string(loss_case) + ".json";
  return yslot::validate_topology(yslot::load_topology_spec(path)).with_cycle_slots(cycle);
}

inline yslot::TopologySpec example_spec() {
  return yslot::load_topology_spec(std::string(YSLOT_DATA_DIR) + "/example8_case1.json");
}

}  // namespace fixtures
