#pragma once

#include <memory>
#include <string>

#include "cypherforge/engine.hpp"

namespace cypherforge {

std::unique_ptr<EngineAdapter> make_neo4j_http_engine(const std::string& url);
std::unique_ptr<EngineAdapter> make_redisgraph_engine(const std::string& url);
std::unique_ptr<EngineAdapter> make_age_engine(const std::string& url);

}  // namespace cypherforge
