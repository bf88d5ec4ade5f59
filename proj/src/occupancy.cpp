#include "collision_census/occupancy.hpp"

#include <bit>

namespace census {

namespace {
constexpr Node kEmpty = -1;
}

OccupancyMap::OccupancyMap(std::size_t agents) {
  const std::size_t capacity = std::bit_ceil(std::max<std::size_t>(2 * agents, 8));
  mask_ = capacity - 1;
  shift_ = 64 - std::countr_zero(capacity);
  keys_.assign(capacity, kEmpty);
  totals_.assign(capacity, 0);
  marks_.assign(capacity, 0);
  used_.reserve(agents);
}

std::size_t OccupancyMap::slot_of(Node v) const noexcept {
  std::size_t slot = static_cast<std::size_t>((static_cast<std::uint64_t>(v) * 0x9E3779B97F4A7C15ULL) >> shift_);
  while (keys_[slot] != kEmpty && keys_[slot] != v) slot = (slot + 1) & mask_;
  return slot;
}

void OccupancyMap::clear() noexcept {
  for (const auto slot : used_) {
    keys_[slot] = kEmpty;
    totals_[slot] = 0;
    marks_[slot] = 0;
  }
  used_.clear();
}

void OccupancyMap::add(Node v, bool marked) {
  const auto slot = slot_of(v);
  if (keys_[slot] == kEmpty) {
    keys_[slot] = v;
    used_.push_back(slot);
  }
  ++totals_[slot];
  if (marked) ++marks_[slot];
}

std::int64_t OccupancyMap::total(Node v) const noexcept {
  const auto slot = slot_of(v);
  return keys_[slot] == v ? totals_[slot] : 0;
}

std::int64_t OccupancyMap::marked(Node v) const noexcept {
  const auto slot = slot_of(v);
  return keys_[slot] == v ? marks_[slot] : 0;
}

std::vector<std::int64_t> occupancy_collisions(std::span<const Node> positions) {
  OccupancyMap map(positions.size());
  for (const Node v : positions) map.add(v);
  std::vector<std::int64_t> out;
  out.reserve(positions.size());
  for (const Node v : positions) out.push_back(map.total(v) - 1);
  return out;
}

}  // namespace census
