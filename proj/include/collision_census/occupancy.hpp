#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "collision_census/topology.hpp"

namespace census {

/// Per-round node -> occupancy table sized by agent count, not by graph size.
/// Open addressing over a power-of-two table; clear() touches only used slots.
class OccupancyMap {
 public:
  explicit OccupancyMap(std::size_t agents);

  void clear() noexcept;
  void add(Node v, bool marked = false);
  /// Agents at v (including any caller standing there).
  std::int64_t total(Node v) const noexcept;
  /// Marked agents at v.
  std::int64_t marked(Node v) const noexcept;

 private:
  std::size_t slot_of(Node v) const noexcept;

  std::size_t mask_ = 0;
  int shift_ = 0;
  std::vector<Node> keys_;
  std::vector<std::int64_t> totals_;
  std::vector<std::int64_t> marks_;
  std::vector<std::size_t> used_;
};

/// For each agent, the number of OTHER agents on its node.
std::vector<std::int64_t> occupancy_collisions(std::span<const Node> positions);

}  // namespace census
