#include <chrono>
#include <stdexcept>
#include <thread>

#include "cypherforge/engine.hpp"

namespace cypherforge {

MockFault parse_mock_fault(const std::string& spec) {
  auto first = spec.find(':');
  if (first == std::string::npos || first == 0)
    throw std::runtime_error("mock fault needs <trigger>:<kind>: " + spec);
  auto second = spec.find(':', first + 1);
  MockFault f;
  f.trigger = spec.substr(0, first);
  std::string kind = second == std::string::npos
                         ? spec.substr(first + 1)
                         : spec.substr(first + 1, second - first - 1);
  if (second != std::string::npos) f.message = spec.substr(second + 1);
  if (kind == "error")
    f.kind = MockFault::Kind::Semantic;
  else if (kind == "syntax")
    f.kind = MockFault::Kind::Syntax;
  else if (kind == "internal")
    f.kind = MockFault::Kind::Internal;
  else if (kind == "crash")
    f.kind = MockFault::Kind::Crash;
  else if (kind == "timeout")
    f.kind = MockFault::Kind::Timeout;
  else
    throw std::runtime_error("unknown mock fault kind: " + kind);
  if (f.message.empty()) f.message = "fault on " + f.trigger;
  return f;
}

MockEngine::MockEngine(std::vector<MockFault> faults)
    : faults_(std::move(faults)) {}

Outcome MockEngine::submit(const std::string& query, unsigned timeout_ms,
                           std::size_t) {
  ++submissions_;
  if (crashed_) return Outcome::connection_lost();
  for (const auto& f : faults_) {
    if (!f.matches(query)) continue;
    if (f.delay_ms) {
      if (f.delay_ms >= timeout_ms) return Outcome::timeout();
      std::this_thread::sleep_for(std::chrono::milliseconds(f.delay_ms));
    }
    switch (f.kind) {
      case MockFault::Kind::Semantic:
        return Outcome::error(f.message, "mock.semantic");
      case MockFault::Kind::Syntax:
        return Outcome::error(f.message, "mock.syntax");
      case MockFault::Kind::Internal:
        return Outcome::error(f.message, "mock.internal");
      case MockFault::Kind::Crash:
        crashed_ = true;
        return Outcome::connection_lost();
      case MockFault::Kind::Timeout:
        return Outcome::timeout();
    }
  }
  return Outcome::rows_returned(1);
}

bool MockEngine::reset() {
  ++resets_;
  crashed_ = false;
  return true;
}

}  // namespace cypherforge
