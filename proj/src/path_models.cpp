#include "yslot/path_models.hpp"

#include <algorithm>
#include <set>

namespace yslot {

std::string_view to_string(GroupLabel label) {
  switch (label) {
    case GroupLabel::X: return "X";
    case GroupLabel::Y: return "Y";
    case GroupLabel::Z: return "Z";
  }
  return "?";
}

std::string PathModel::id() const { return name + "[Z=" + std::to_string(z_gateway()) + "]"; }

namespace {

std::size_t sep_position(const Branch& branch, LinkId sep) {
  for (std::size_t p = 0; p + 1 < branch.links.size(); ++p) {
    if (branch.links[p] == sep) return p;
  }
  throw Error(ErrorKind::UnknownModel, "link " + std::to_string(sep) + " is not an inter-node link of the branch");
}

void order_upstream_first(PathModel& model, Group& group) {
  std::sort(group.nodes.begin(), group.nodes.end(), [&](NodeId a, NodeId b) {
    const auto la = model.routes.at(a).size();
    const auto lb = model.routes.at(b).size();
    return la != lb ? la > lb : a < b;
  });
}

}  // namespace

PathModel make_path_model(const Topology& topology, int no_sep_branch, LinkId sep_x, LinkId sep_y) {
  if (no_sep_branch < 0 || no_sep_branch > 2) throw Error(ErrorKind::UnknownModel, "no-sep branch index out of range");
  PathModel m;
  m.no_sep_branch = no_sep_branch;
  std::vector<int> others;
  for (int b = 0; b < 3; ++b) {
    if (b != no_sep_branch) others.push_back(b);
  }
  m.x_branch = others[0];
  m.y_branch = others[1];
  m.sep_x = sep_x;
  m.sep_y = sep_y;

  const auto& branches = topology.branches();
  const Branch& zb = branches[no_sep_branch];
  const NodeId central = topology.central();

  auto& gz = m.groups[static_cast<int>(GroupLabel::Z)];
  gz.label = GroupLabel::Z;
  gz.gateway = zb.gateway;

  // Z branch and central node route straight out along the Z branch.
  m.routes[central] = zb.links;
  gz.nodes.push_back(central);
  for (std::size_t i = 0; i < zb.nodes.size(); ++i) {
    m.routes[zb.nodes[i]] = std::vector<LinkId>(zb.links.begin() + static_cast<std::ptrdiff_t>(i) + 1, zb.links.end());
    gz.nodes.push_back(zb.nodes[i]);
  }

  const std::pair<GroupLabel, LinkId> sides[2] = {{GroupLabel::X, sep_x}, {GroupLabel::Y, sep_y}};
  for (int s = 0; s < 2; ++s) {
    const auto [label, sep] = sides[s];
    const Branch& br = branches[s == 0 ? m.x_branch : m.y_branch];
    const std::size_t p = sep_position(br, sep);
    auto& g = m.groups[static_cast<int>(label)];
    g.label = label;
    g.gateway = br.gateway;
    for (std::size_t i = 0; i < br.nodes.size(); ++i) {
      std::vector<LinkId> route;
      if (i >= p) {
        route.assign(br.links.begin() + static_cast<std::ptrdiff_t>(i) + 1, br.links.end());
        g.nodes.push_back(br.nodes[i]);
      } else {
        // Inward to the central node, then out along the Z branch.
        for (std::size_t k = i + 1; k-- > 0;) route.push_back(br.links[k]);
        route.insert(route.end(), zb.links.begin(), zb.links.end());
        gz.nodes.push_back(br.nodes[i]);
      }
      m.routes[br.nodes[i]] = std::move(route);
    }
  }

  for (auto& g : m.groups) {
    order_upstream_first(m, g);
    for (NodeId n : g.nodes) m.group_of[n] = g.label;
  }
  for (const auto& [node, route] : m.routes) {
    NodeId at = node;
    for (LinkId l : route) {
      const NodeId next = topology.other_end(l, at);
      m.link_use[l] = Transmission{at, next, l};
      at = next;
    }
  }
  m.name = std::to_string(m.group(GroupLabel::X).nodes.size()) + "-" + std::to_string(m.group(GroupLabel::Y).nodes.size()) +
           "-" + std::to_string(m.group(GroupLabel::Z).nodes.size());
  m.type = classify_model(m, topology);
  return m;
}

int classify_model(const PathModel& model, const Topology& topology) {
  const auto& br = topology.branches();
  const int adjacent = (br[model.x_branch].links.front() == model.sep_x ? 1 : 0) +
                       (br[model.y_branch].links.front() == model.sep_y ? 1 : 0);
  return 3 - adjacent;
}

std::vector<PathModel> enumerate_path_models(const Topology& topology, std::optional<int> fixed_z) {
  std::vector<PathModel> out;
  const auto& br = topology.branches();
  for (int z = 0; z < 3; ++z) {
    if (fixed_z && *fixed_z != z) continue;
    std::vector<int> others;
    for (int b = 0; b < 3; ++b) {
      if (b != z) others.push_back(b);
    }
    const Branch& bx = br[others[0]];
    const Branch& by = br[others[1]];
    for (std::size_t px = 0; px + 1 < bx.links.size(); ++px) {
      for (std::size_t py = 0; py + 1 < by.links.size(); ++py) {
        out.push_back(make_path_model(topology, z, bx.links[px], by.links[py]));
      }
    }
  }
  return out;
}

int default_z_branch(const Topology& topology) {
  const auto& br = topology.branches();
  for (int b = 0; b < 3; ++b) {
    if (topology.gateway_label(br[b].gateway) == "Z") return b;
  }
  return 2;
}

PathModel find_model(const Topology& topology, const std::string& name, std::optional<NodeId> no_sep_gateway) {
  int z = default_z_branch(topology);
  if (no_sep_gateway) {
    z = -1;
    for (int b = 0; b < 3; ++b) {
      if (topology.branches()[b].gateway == *no_sep_gateway) z = b;
    }
    if (z < 0) throw Error(ErrorKind::UnknownModel, "no gateway with id " + std::to_string(*no_sep_gateway));
  }
  for (auto& m : enumerate_path_models(topology, z)) {
    if (m.name == name) return m;
  }
  throw Error(ErrorKind::UnknownModel, "no path model named " + name);
}

std::vector<Transmission> group_transmissions(const PathModel& model, GroupLabel label) {
  std::vector<Transmission> out;
  std::set<Transmission> seen;
  for (NodeId n : model.group(label).nodes) {
    for (LinkId l : model.routes.at(n)) {
      const auto& t = model.link_use.at(l);
      if (seen.insert(t).second) out.push_back(t);
    }
  }
  return out;
}

bool groups_conflict(const PathModel& model, const ConflictSet& conflicts, GroupLabel a, GroupLabel b) {
  const auto ta = group_transmissions(model, a);
  const auto tb = group_transmissions(model, b);
  for (const auto& x : ta) {
    for (const auto& y : tb) {
      if (conflicts.conflicts(x, y)) return true;
    }
  }
  return false;
}

namespace {

PatternSpec build_pattern(const PathModel& model, const ConflictSet& conflicts, int id, bool z_first) {
  using G = GroupLabel;
  PatternSpec p;
  p.id = id;
  const G all[3] = {G::X, G::Y, G::Z};
  std::set<G> independent;
  for (G g : all) {
    bool any = false;
    for (G h : all) {
      if (g != h && groups_conflict(model, conflicts, g, h)) any = true;
    }
    if (!any) independent.insert(g);
  }
  p.independent.assign(independent.begin(), independent.end());

  std::vector<std::vector<G>> raw = z_first ? std::vector<std::vector<G>>{{G::Z}, {G::X, G::Y}}
                                            : std::vector<std::vector<G>>{{G::X, G::Y}, {G::Z}};
  for (const auto& tier : raw) {
    std::vector<G> kept;
    for (G g : tier) {
      if (!independent.count(g)) kept.push_back(g);
    }
    // Groups that conflict with each other cannot share a tier.
    if (kept.size() == 2 && groups_conflict(model, conflicts, kept[0], kept[1])) {
      p.tiers.push_back({kept[0]});
      p.tiers.push_back({kept[1]});
    } else if (!kept.empty()) {
      p.tiers.push_back(kept);
    }
  }

  std::string d;
  for (std::size_t t = 0; t < p.tiers.size(); ++t) {
    if (t) d += " > ";
    for (std::size_t k = 0; k < p.tiers[t].size(); ++k) {
      if (k) d += ",";
      d += "S_" + std::string(to_string(p.tiers[t][k]));
    }
  }
  if (!p.independent.empty()) {
    d += d.empty() ? "independent:" : "; independent:";
    for (std::size_t k = 0; k < p.independent.size(); ++k) d += (k ? ",S_" : " S_") + std::string(to_string(p.independent[k]));
  }
  p.description = d;
  return p;
}

}  // namespace

std::vector<PatternSpec> patterns_for(const PathModel& model, const ConflictSet& conflicts) {
  switch (model.type) {
    case 1:
      return {build_pattern(model, conflicts, 1, false), build_pattern(model, conflicts, 2, true)};
    case 2:
      return {build_pattern(model, conflicts, 1, true), build_pattern(model, conflicts, 2, false)};
    default:
      return {build_pattern(model, conflicts, 1, true)};
  }
}

}  // namespace yslot
