#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "yslot/net_model.hpp"
#include "yslot/path_models.hpp"
#include "yslot/relax_solver.hpp"

namespace yslot {

/// One packet of one origin on one link. Packets are numbered from 0.
struct UnitKey {
  NodeId origin = 0;
  LinkId link = 0;
  int packet = 0;
  auto operator<=>(const UnitKey&) const = default;
  PairKey pair() const { return {origin, link}; }
};

struct IntegerChainAllocation {
  std::map<UnitKey, int> units;
  int budget = 0;
  double log_product = 0.0;
  double product = 1.0;
  bool feasible = true;  // false when the budget cannot give every unit a slot
};

/// Integer slots summing exactly to `budget`, maximizing the chain product.
/// Starts from the floor of the relaxed values, spends the leftover on the
/// best marginal gains and then polishes with pairwise exchanges.
IntegerChainAllocation round_allocation(const GroupChain& chain, const RelaxedSolution& relaxed, int budget);
IntegerChainAllocation round_allocation(const GroupChain& chain, int budget);

/// Chain of one group with the topology's losses and rates.
GroupChain chain_for(const PathModel& model, const Topology& topology, GroupLabel label, double budget);

template <class V>
struct UnitSlots {
  V early{};   // s': inside the early window
  V serial{};  // s
  V total() const { return early + serial; }
};

template <class V>
struct GroupPlan {
  GroupLabel label = GroupLabel::Z;
  int tier = 0;  // -1 for independent groups
  std::string variant = "window";
  V window{};  // a
  V lane{};    // L = a + sum of head slots
  std::set<PairKey> heads;
  std::set<PairKey> eligible;
  std::map<UnitKey, UnitSlots<V>> units;
  double log_product = 0.0;
  bool feasible = true;
  std::string case_label = "-";
  std::string predicted;  // orientation predicted by the loss-rate rule
};

template <class V>
struct Allocation {
  std::vector<GroupPlan<V>> groups;
  double log_product = 0.0;
  double product = 1.0;

  const GroupPlan<V>* group(GroupLabel label) const;
  /// Total slots per unit over all groups.
  std::map<UnitKey, V> totals() const;
};

using SlotAllocation = Allocation<int>;
using RelaxedAllocation = Allocation<double>;

template <class V>
struct Burst {
  Transmission tx;
  NodeId origin = 0;
  int packet = 0;
  bool early = false;
  V start{};
  V length{};
  V end() const { return start + length; }
};

/// Places a group's bursts: early units serialized from slot 0, heads from
/// the window to the lane end, and the rest serialized from the lane end.
template <class V>
std::vector<Burst<V>> layout_group(const GroupPlan<V>& plan, const PathModel& model);

/// End of the last earlier burst that conflicts with any of `group_tx`.
template <class V>
V early_window(const std::vector<Transmission>& group_tx, const std::vector<Burst<V>>& earlier, const ConflictSet& conflicts);

/// Pairs whose route prefix, up to and including the pair's link, conflicts
/// with none of `blockers`.
std::set<PairKey> eligible_pairs(const PathModel& model, GroupLabel label, const std::vector<Transmission>& blockers,
                                 const ConflictSet& conflicts);

/// First-hop pairs of origins no other origin of the group routes through.
std::set<PairKey> head_pairs(const PathModel& model, GroupLabel label);

/// Moves eligible units into the early window, in order of hop index,
/// then upstream origin, then packet. Returns the number of units touched.
template <class V>
int assign_early_slots(GroupPlan<V>& plan, const PathModel& model);

/// Integer lane problem solved by enumerating the budget of N.
struct LaneInteger {
  int x = 0;
  IntegerChainAllocation n, h, e;
  double log_product = 0.0;
  bool feasible = true;
};

LaneInteger solve_lane_integer(const GroupChain& n, const GroupChain& h, const GroupChain& e, int cycle, int window);

/// The two orientations of a heads group: heads hidden under the early
/// pairs, or early pairs hidden under the heads. Log products of each.
struct OrientationCandidates {
  double heads_hidden = 0.0;
  double early_hidden = 0.0;
};

OrientationCandidates orientation_candidates(const GroupChain& full, const std::set<PairKey>& heads,
                                             const std::set<PairKey>& early, int cycle, int window);

/// Closed-form early split for a three-origin line u -> m -> t where m and t
/// may send early: cases c1..c5 driven by the tentative solution b.
struct ReferenceSplit {
  std::string label;
  std::map<PairKey, UnitSlots<int>> slots;
};

ReferenceSplit reference_three_node_split(const GroupChain& chain, int cycle, int window);

struct PatternSolution {
  PathModel model;
  PatternSpec pattern;
  int cycle_slots = 0;
  RelaxedAllocation relaxed;
  SlotAllocation integer;
  double tub = 0.0;
  double com = 0.0;
  std::map<NodeId, double> node_tub;
  std::map<NodeId, double> node_com;
  std::string case_label = "-";
  std::string predicted_orientation;
  bool feasible = true;
};

PatternSolution solve_pattern(const PathModel& model, const PatternSpec& pattern, const Topology& topology,
                              const ConflictSet& conflicts);

/// Per-node probability that all of the node's packets arrive, and the
/// product over nodes.
struct ComResult {
  std::map<NodeId, double> per_node;
  double product = 1.0;
};

ComResult com_probability(const std::map<UnitKey, int>& totals, const PathModel& model, const Topology& topology);
ComResult com_probability(const SlotAllocation& alloc, const PathModel& model, const Topology& topology);

/// Every (model, pattern), best COM first; ties by TUB, then model id.
std::vector<PatternSolution> optimize(const Topology& topology, std::optional<int> fixed_z = std::nullopt);

}  // namespace yslot
