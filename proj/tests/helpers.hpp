#pragma once

#include "gather/engine.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace testing_support {

using gather::Configuration;
using gather::Point;

inline Configuration make_config(const std::vector<Point>& pts, double delta = 1.0) {
  Configuration c;
  for (const auto& p : pts) c.robots.push_back({p, gather::RobotStatus::Correct, std::nullopt, delta});
  return c;
}

inline std::string trace_csv(const gather::RunResult& r) {
  std::ostringstream out;
  gather::write_trace_csv(out, r.trace);
  return out.str();
}

}  // namespace testing_support
