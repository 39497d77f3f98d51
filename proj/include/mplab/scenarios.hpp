#pragma once

#include "mplab/config.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mplab {

struct Scenario {
  std::string name;
  std::string exercises;  // which statement the scenario checks
  RunConfig config;
  bool ode_only = false;
};

/// S1..S6 in fixed order.
std::vector<Scenario> catalog();
std::optional<Scenario> find_scenario(const std::string& name);

}  // namespace mplab
