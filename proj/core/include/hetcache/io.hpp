#pragma once

#include <string>

#include "hetcache/delivery.hpp"
#include "hetcache/popularity.hpp"
#include "hetcache/topology.hpp"

namespace hetcache {

// One generated problem instance: geometry plus the request model.
struct Scenario {
  NetworkInstance instance;
  PopularityModel popularity;
};

// Plain-text key/value format ("key = value", '#' comments). Positions,
// rank permutations and membership matrices are stored explicitly so a
// reloaded scenario reproduces results bit for bit.
void save_scenario(const std::string& path, const Scenario& scenario);
Scenario load_scenario(const std::string& path);

// Assignment rows serialized as 0/1 strings, one row per node/user.
void save_assignment(const std::string& path, const Assignment& assignment);
Assignment load_assignment(const std::string& path);

}  // namespace hetcache
