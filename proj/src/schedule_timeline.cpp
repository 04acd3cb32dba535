#include "yslot/schedule_timeline.hpp"

#include <algorithm>
#include <ostream>
#include <set>

namespace yslot {

std::size_t Timeline::transmission_count() const {
  std::size_t n = 0;
  for (const auto& s : slots) n += s.size();
  return n;
}

Timeline build_timeline(const SlotAllocation& alloc, const PatternSpec& pattern, const ConflictSet& conflicts,
                        const PathModel& model, const Topology& topology) {
  Timeline t;
  t.cycle_slots = topology.cycle_slots();
  std::vector<Burst<int>> placed;
  std::vector<Burst<int>> all;

  auto place = [&](GroupLabel label, const std::vector<Burst<int>>& earlier, std::vector<Burst<int>>& sink) {
    const auto* plan = alloc.group(label);
    if (!plan) throw Error(ErrorKind::InvalidTimeline, "allocation lacks group S_" + std::string(to_string(label)));
    const int a = early_window(group_transmissions(model, label), earlier, conflicts);
    if (a != plan->window) {
      throw Error(ErrorKind::InvalidTimeline, "window of S_" + std::string(to_string(label)) + " is " +
                                                  std::to_string(a) + ", allocation says " + std::to_string(plan->window));
    }
    for (const auto& b : layout_group(*plan, model)) sink.push_back(b);
  };

  for (GroupLabel g : pattern.independent) place(g, {}, all);
  for (const auto& tier : pattern.tiers) {
    std::vector<Burst<int>> tier_bursts;
    for (GroupLabel g : tier) place(g, placed, tier_bursts);
    placed.insert(placed.end(), tier_bursts.begin(), tier_bursts.end());
    all.insert(all.end(), tier_bursts.begin(), tier_bursts.end());
  }

  int length = 0;
  for (const auto& b : all) length = std::max(length, b.end());
  t.slots.resize(static_cast<std::size_t>(length));
  for (const auto& b : all) {
    for (int s = b.start; s < b.end(); ++s) t.slots[static_cast<std::size_t>(s)].push_back({b.tx, b.origin, b.packet});
  }
  for (std::size_t s = 0; s < t.slots.size(); ++s) {
    auto& slot = t.slots[s];
    std::sort(slot.begin(), slot.end());
    for (const auto& x : slot) {
      auto [it, fresh] = t.first_last.try_emplace(x.origin, static_cast<int>(s), static_cast<int>(s));
      if (!fresh) it->second.second = static_cast<int>(s);
    }
  }
  return t;
}

Timeline build_timeline(const PatternSolution& solution, const ConflictSet& conflicts, const Topology& topology) {
  return build_timeline(solution.integer, solution.pattern, conflicts, solution.model,
                        topology.with_cycle_slots(solution.cycle_slots));
}

TimelineReport verify_timeline(const Timeline& t, const ConflictSet& conflicts, int cycle_slots) {
  auto fail = [](ErrorKind kind, int slot, std::string msg) { return TimelineReport{false, kind, slot, std::move(msg)}; };
  if (static_cast<int>(t.slots.size()) > cycle_slots) {
    return fail(ErrorKind::DoesNotFit, cycle_slots,
                "timeline needs " + std::to_string(t.slots.size()) + " slots, cycle has " + std::to_string(cycle_slots));
  }
  // Nodes that have held each (origin, packet) before the current slot.
  std::map<std::pair<NodeId, int>, std::set<NodeId>> holders;
  for (std::size_t s = 0; s < t.slots.size(); ++s) {
    const auto& slot = t.slots[s];
    const int si = static_cast<int>(s);
    for (std::size_t i = 0; i < slot.size(); ++i) {
      for (std::size_t j = i + 1; j < slot.size(); ++j) {
        const auto& a = slot[i].tx;
        const auto& b = slot[j].tx;
        if (a.tx == b.tx || conflicts.conflicts(a, b)) {
          return fail(ErrorKind::ConflictViolation, si,
                      "slot " + std::to_string(s) + ": " + std::to_string(a.tx) + "->" + std::to_string(a.rx) + " and " +
                          std::to_string(b.tx) + "->" + std::to_string(b.rx));
        }
      }
    }
    for (const auto& x : slot) {
      if (x.tx.tx == x.origin) continue;
      const auto it = holders.find({x.origin, x.packet});
      if (it == holders.end() || !it->second.count(x.tx.tx)) {
        return fail(ErrorKind::CausalityViolation, si,
                    "slot " + std::to_string(s) + ": node " + std::to_string(x.tx.tx) + " relays packet of " +
                        std::to_string(x.origin) + " before receiving it");
      }
    }
    for (const auto& x : slot) holders[{x.origin, x.packet}].insert(x.tx.rx);
  }
  return {};
}

void write_grid(std::ostream& out, const Timeline& t, const Topology& topology) {
  auto name = [&](NodeId id) { return topology.is_gateway(id) ? topology.gateway_label(id) : std::to_string(id); };
  for (std::size_t s = 0; s < t.slots.size(); ++s) {
    out << s;
    char sep = '\t';
    for (const auto& x : t.slots[s]) {
      out << sep;
      sep = ' ';
      out << name(x.tx.tx) << "→" << name(x.tx.rx) << ':' << x.tx.link << '#' << x.origin;
      if (topology.rate(x.origin) > 1) out << '.' << x.packet;
    }
    out << '\n';
  }
}

}  // namespace yslot
