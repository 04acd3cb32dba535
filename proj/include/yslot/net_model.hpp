#pragma once

#include <array>
#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "yslot/error.hpp"

namespace yslot {

using NodeId = int;
using LinkId = int;

struct NodeSpec {
  NodeId id = 0;
  int rate = 1;  // packets generated per cycle
};

struct GatewaySpec {
  NodeId id = 0;
  std::string name;  // optional display label, e.g. "X"
};

struct LinkSpec {
  LinkId id = 0;
  NodeId a = 0;
  NodeId b = 0;
  double loss = 0.0;
};

/// Unvalidated topology description, as read from a config file.
struct TopologySpec {
  std::string name;
  int cycle_slots = 0;
  std::vector<NodeSpec> nodes;
  std::vector<GatewaySpec> gateways;
  std::vector<LinkSpec> links;
  std::vector<std::pair<NodeId, NodeId>> proximity;
};

/// One branch of the Y: the chain from the central node out to a gateway.
/// `nodes` excludes the central node and is ordered outward; `links[k]`
/// joins the k-th hop, so `links.front()` touches the central node and
/// `links.back()` touches the gateway.
struct Branch {
  NodeId gateway = 0;
  std::vector<NodeId> nodes;
  std::vector<LinkId> links;
};

/// A directed use of a link: `tx` sends to `rx` over `link`.
struct Transmission {
  NodeId tx = 0;
  NodeId rx = 0;
  LinkId link = 0;

  auto operator<=>(const Transmission&) const = default;
};

/// Validated Y-shaped topology. Immutable after construction.
class Topology {
 public:
  const std::string& name() const { return name_; }
  int cycle_slots() const { return cycle_slots_; }
  const std::vector<NodeSpec>& nodes() const { return nodes_; }
  const std::vector<GatewaySpec>& gateways() const { return gateways_; }
  const std::vector<LinkSpec>& links() const { return links_; }
  const std::set<std::pair<NodeId, NodeId>>& proximity() const { return proximity_; }

  bool is_gateway(NodeId id) const;
  bool is_node(NodeId id) const;
  int rate(NodeId node) const;
  const LinkSpec& link(LinkId id) const;
  double loss(LinkId id) const { return link(id).loss; }
  NodeId other_end(LinkId id, NodeId from) const;
  bool in_proximity(NodeId a, NodeId b) const;

  NodeId central() const { return central_; }
  /// Branches in the order the gateways were listed.
  const std::array<Branch, 3>& branches() const { return branches_; }
  std::string gateway_label(NodeId gateway) const;

  /// Same topology with a different cycle length.
  Topology with_cycle_slots(int slots) const;
  /// Same topology with per-link losses replaced (links not in the map keep theirs).
  Topology with_losses(const std::map<LinkId, double>& losses) const;

 private:
  friend Topology validate_topology(const TopologySpec& raw);

  std::string name_;
  int cycle_slots_ = 0;
  std::vector<NodeSpec> nodes_;
  std::vector<GatewaySpec> gateways_;
  std::vector<LinkSpec> links_;
  std::set<std::pair<NodeId, NodeId>> proximity_;  // stored with first < second
  std::map<NodeId, int> rate_;
  std::map<LinkId, std::size_t> link_index_;
  NodeId central_ = 0;
  std::array<Branch, 3> branches_;
};

Topology validate_topology(const TopologySpec& raw);

/// Reads the JSON config format. Parse errors report the line number.
TopologySpec load_topology_spec(const std::filesystem::path& path);
TopologySpec parse_topology_spec(const std::string& text);

/// Set of unordered transmission pairs that must not share a slot.
class ConflictSet {
 public:
  bool conflicts(const Transmission& a, const Transmission& b) const;
  const std::set<std::pair<Transmission, Transmission>>& pairs() const { return pairs_; }
  /// Every directed transmission the topology admits (gateways never send).
  const std::vector<Transmission>& transmissions() const { return transmissions_; }

 private:
  friend ConflictSet derive_conflicts(const Topology& topology);

  std::vector<Transmission> transmissions_;
  std::set<std::pair<Transmission, Transmission>> pairs_;  // first < second
};

/// Protocol interference rule between two directed transmissions.
bool interferes(const Topology& topology, const Transmission& a, const Transmission& b);

ConflictSet derive_conflicts(const Topology& topology);

}  // namespace yslot
