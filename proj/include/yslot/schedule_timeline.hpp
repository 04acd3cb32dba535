#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "yslot/slot_allocator.hpp"

namespace yslot {

struct SlotTx {
  Transmission tx;
  NodeId origin = 0;
  int packet = 0;
  auto operator<=>(const SlotTx&) const = default;
};

struct Timeline {
  int cycle_slots = 0;
  std::vector<std::vector<SlotTx>> slots;
  /// Per origin: first and last slot carrying any of its packets.
  std::map<NodeId, std::pair<int, int>> first_last;

  std::size_t transmission_count() const;
};

/// Lays out every group of the allocation. Windows are recomputed from the
/// bursts of earlier tiers and must agree with the allocation.
Timeline build_timeline(const SlotAllocation& alloc, const PatternSpec& pattern, const ConflictSet& conflicts,
                        const PathModel& model, const Topology& topology);
Timeline build_timeline(const PatternSolution& solution, const ConflictSet& conflicts, const Topology& topology);

struct TimelineReport {
  bool ok = true;
  std::optional<ErrorKind> kind;
  int slot = -1;
  std::string message;
};

TimelineReport verify_timeline(const Timeline& t, const ConflictSet& conflicts, int cycle_slots);

/// One line per slot: "<slot>\t<tx>→<rx>:<link>#<origin>[.<packet>] ...".
void write_grid(std::ostream& out, const Timeline& t, const Topology& topology);

}  // namespace yslot
