#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "yslot/net_model.hpp"

namespace yslot {

enum class GroupLabel { X, Y, Z };

std::string_view to_string(GroupLabel label);

struct Group {
  GroupLabel label = GroupLabel::Z;
  NodeId gateway = 0;
  std::vector<NodeId> nodes;  // most-upstream first
};

/// One placement of the two separation links. Branch indices refer to
/// Topology::branches().
struct PathModel {
  std::string name;  // "l-r-d"
  int type = 1;
  int no_sep_branch = 2;
  int x_branch = 0;
  int y_branch = 1;
  LinkId sep_x = 0;
  LinkId sep_y = 0;
  std::array<Group, 3> groups;  // indexed by GroupLabel
  std::map<NodeId, std::vector<LinkId>> routes;
  std::map<NodeId, GroupLabel> group_of;
  /// Directed use of each traffic-carrying link.
  std::map<LinkId, Transmission> link_use;

  const Group& group(GroupLabel label) const { return groups[static_cast<int>(label)]; }
  NodeId z_gateway() const { return group(GroupLabel::Z).gateway; }
  /// Unique key across all enumerated models, e.g. "3-2-3[Z=93]".
  std::string id() const;
};

/// Models for every (no-sep branch, sep position) choice. With `fixed_z`
/// only the given branch index is used as the no-sep branch.
std::vector<PathModel> enumerate_path_models(const Topology& topology, std::optional<int> fixed_z = std::nullopt);

/// Builds one model from explicit separation links.
PathModel make_path_model(const Topology& topology, int no_sep_branch, LinkId sep_x, LinkId sep_y);

int classify_model(const PathModel& model, const Topology& topology);

/// Finds a model by its l-r-d name. `no_sep_gateway` picks the Z gateway;
/// by default the last listed gateway is used.
PathModel find_model(const Topology& topology, const std::string& name, std::optional<NodeId> no_sep_gateway = std::nullopt);

/// Branch index of the gateway named "Z", else the last gateway.
int default_z_branch(const Topology& topology);

struct PatternSpec {
  int id = 1;
  /// Groups in priority order; each tier may start only after the bursts it
  /// conflicts with in earlier tiers.
  std::vector<std::vector<GroupLabel>> tiers;
  std::vector<GroupLabel> independent;
  std::string description;
};

/// True if any transmission of group `a` conflicts with one of group `b`.
bool groups_conflict(const PathModel& model, const ConflictSet& conflicts, GroupLabel a, GroupLabel b);

std::vector<PatternSpec> patterns_for(const PathModel& model, const ConflictSet& conflicts);

/// Transmissions a group uses, in route order of its origins.
std::vector<Transmission> group_transmissions(const PathModel& model, GroupLabel label);

}  // namespace yslot
