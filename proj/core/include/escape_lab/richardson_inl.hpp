#pragma once

#include <string>
#include <vector>

#include "escape_lab/errors.hpp"

namespace escape_lab {

template <typename Visitor>
std::uint64_t for_each_reached(const LazyField& field, double t, Visitor&& visit,
                               TraversalLimits limits) {
  struct Frame {
    std::uint64_t key;
    std::size_t level;
    double time;
  };
  std::uint64_t visited = 0;
  if (!(t >= 0.0)) return visited;
  std::vector<Frame> stack{{field.root_key(), 0, 0.0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.level > limits.max_level) {
      throw ResourceError("reached set at time " + std::to_string(t) + " extends past level " +
                          std::to_string(limits.max_level));
    }
    if (++visited > limits.max_nodes) {
      throw ResourceError("reached set at time " + std::to_string(t) + " exceeds " +
                          std::to_string(limits.max_nodes) + " vertices");
    }
    visit(f.level, f.time);
    const int branches = field.tree().branching(f.level);
    for (int b = 0; b < branches; ++b) {
      const std::uint64_t key = LazyField::child_key(f.key, static_cast<std::uint32_t>(b));
      const double time = f.time + field.weight(key);
      if (time <= t) stack.push_back({key, f.level + 1, time});
    }
  }
  return visited;
}

}  // namespace escape_lab
