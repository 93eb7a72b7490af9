#include <stdexcept>

#include "cypherforge/engine.hpp"
#include "engines_internal.hpp"

namespace cypherforge {

const std::vector<std::string>& engine_targets() {
  static const std::vector<std::string> targets = {"mock", "neo4j",
                                                   "redisgraph", "age"};
  return targets;
}

bool known_target(const std::string& target) {
  for (const std::string& t : engine_targets())
    if (t == target) return true;
  return false;
}

std::unique_ptr<EngineAdapter> make_engine(const std::string& target,
                                           const std::string& url,
                                           std::vector<MockFault> faults) {
  if (target == "mock") return std::make_unique<MockEngine>(std::move(faults));
  if (target == "neo4j") return make_neo4j_http_engine(url);
  if (target == "redisgraph") return make_redisgraph_engine(url);
  if (target == "age") return make_age_engine(url);
  throw std::runtime_error("unknown target: " + target);
}

}  // namespace cypherforge
