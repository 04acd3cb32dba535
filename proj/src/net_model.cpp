#include "yslot/net_model.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <queue>
#include <sstream>

#include "json.hpp"

namespace yslot {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotATree: return "NotATree";
    case ErrorKind::GatewayCountNot3: return "GatewayCountNot3";
    case ErrorKind::NoDegree3Node: return "NoDegree3Node";
    case ErrorKind::LossOutOfRange: return "LossOutOfRange";
    case ErrorKind::LinkNotInProximity: return "LinkNotInProximity";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ConvergenceError: return "ConvergenceError";
    case ErrorKind::InfeasibleBudget: return "InfeasibleBudget";
    case ErrorKind::UnknownModel: return "UnknownModel";
    case ErrorKind::DoesNotFit: return "DoesNotFit";
    case ErrorKind::CausalityViolation: return "CausalityViolation";
    case ErrorKind::ConflictViolation: return "ConflictViolation";
    case ErrorKind::InvalidTimeline: return "InvalidTimeline";
    case ErrorKind::NodeSetMismatch: return "NodeSetMismatch";
  }
  return "Unknown";
}

namespace {

std::pair<NodeId, NodeId> ordered(NodeId a, NodeId b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

[[noreturn]] void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace

bool Topology::is_gateway(NodeId id) const {
  return std::any_of(gateways_.begin(), gateways_.end(), [id](const GatewaySpec& g) { return g.id == id; });
}

bool Topology::is_node(NodeId id) const { return rate_.count(id) != 0; }

int Topology::rate(NodeId node) const {
  auto it = rate_.find(node);
  if (it == rate_.end()) fail(ErrorKind::InvalidConfig, "unknown node " + std::to_string(node));
  return it->second;
}

const LinkSpec& Topology::link(LinkId id) const {
  auto it = link_index_.find(id);
  if (it == link_index_.end()) fail(ErrorKind::InvalidConfig, "unknown link " + std::to_string(id));
  return links_[it->second];
}

NodeId Topology::other_end(LinkId id, NodeId from) const {
  const auto& l = link(id);
  return l.a == from ? l.b : l.a;
}

bool Topology::in_proximity(NodeId a, NodeId b) const { return proximity_.count(ordered(a, b)) != 0; }

std::string Topology::gateway_label(NodeId gateway) const {
  for (const auto& g : gateways_) {
    if (g.id == gateway) return g.name.empty() ? std::to_string(g.id) : g.name;
  }
  return std::to_string(gateway);
}

Topology Topology::with_cycle_slots(int slots) const {
  if (slots < 1) fail(ErrorKind::InvalidConfig, "cycle_slots must be >= 1");
  Topology copy = *this;
  copy.cycle_slots_ = slots;
  return copy;
}

Topology Topology::with_losses(const std::map<LinkId, double>& losses) const {
  Topology copy = *this;
  for (const auto& [id, q] : losses) {
    if (!(q > 0.0 && q < 1.0)) fail(ErrorKind::LossOutOfRange, "link " + std::to_string(id) + " loss " + std::to_string(q));
    copy.links_[copy.link_index_.at(id)].loss = q;
  }
  return copy;
}

Topology validate_topology(const TopologySpec& raw) {
  if (raw.cycle_slots < 1) fail(ErrorKind::InvalidConfig, "cycle_slots must be >= 1");
  if (raw.gateways.size() != 3) {
    fail(ErrorKind::GatewayCountNot3, "expected 3 gateways, got " + std::to_string(raw.gateways.size()));
  }

  Topology t;
  t.name_ = raw.name;
  t.cycle_slots_ = raw.cycle_slots;
  t.nodes_ = raw.nodes;
  t.gateways_ = raw.gateways;
  t.links_ = raw.links;

  std::set<NodeId> vertices;
  for (const auto& n : raw.nodes) {
    if (n.id <= 0) fail(ErrorKind::InvalidConfig, "node ids must be positive");
    if (n.rate < 1) fail(ErrorKind::InvalidConfig, "node " + std::to_string(n.id) + " rate must be >= 1");
    if (!vertices.insert(n.id).second) fail(ErrorKind::InvalidConfig, "duplicate id " + std::to_string(n.id));
    t.rate_[n.id] = n.rate;
  }
  for (const auto& g : raw.gateways) {
    if (g.id <= 0) fail(ErrorKind::InvalidConfig, "gateway ids must be positive");
    if (!vertices.insert(g.id).second) fail(ErrorKind::InvalidConfig, "duplicate id " + std::to_string(g.id));
  }

  std::map<NodeId, std::vector<LinkId>> incident;
  std::set<std::pair<NodeId, NodeId>> joined;
  for (std::size_t i = 0; i < raw.links.size(); ++i) {
    const auto& l = raw.links[i];
    if (l.id <= 0) fail(ErrorKind::InvalidConfig, "link ids must be positive");
    if (!t.link_index_.emplace(l.id, i).second) fail(ErrorKind::InvalidConfig, "duplicate link id " + std::to_string(l.id));
    if (!vertices.count(l.a) || !vertices.count(l.b)) {
      fail(ErrorKind::InvalidConfig, "link " + std::to_string(l.id) + " references an unknown endpoint");
    }
    if (l.a == l.b) fail(ErrorKind::NotATree, "link " + std::to_string(l.id) + " is a self-loop");
    if (!joined.insert(ordered(l.a, l.b)).second) fail(ErrorKind::NotATree, "parallel links between the same pair");
    if (!(l.loss > 0.0 && l.loss < 1.0)) {
      fail(ErrorKind::LossOutOfRange, "link " + std::to_string(l.id) + " loss must lie in (0,1)");
    }
    incident[l.a].push_back(l.id);
    incident[l.b].push_back(l.id);
  }

  for (const auto& [a, b] : raw.proximity) {
    if (!vertices.count(a) || !vertices.count(b)) fail(ErrorKind::InvalidConfig, "proximity references an unknown id");
    if (a == b) fail(ErrorKind::InvalidConfig, "proximity pair with identical ends");
    t.proximity_.insert(ordered(a, b));
  }
  for (const auto& l : raw.links) {
    if (!t.proximity_.count(ordered(l.a, l.b))) {
      fail(ErrorKind::LinkNotInProximity, "link " + std::to_string(l.id) + " endpoints are not listed in proximity");
    }
  }

  // Tree: |E| = |V| - 1 and connected.
  if (raw.links.size() + 1 != vertices.size()) fail(ErrorKind::NotATree, "link count must be vertex count - 1");
  std::set<NodeId> seen{*vertices.begin()};
  std::queue<NodeId> frontier;
  frontier.push(*vertices.begin());
  while (!frontier.empty()) {
    NodeId v = frontier.front();
    frontier.pop();
    for (LinkId l : incident[v]) {
      NodeId w = t.other_end(l, v);
      if (seen.insert(w).second) frontier.push(w);
    }
  }
  if (seen.size() != vertices.size()) fail(ErrorKind::NotATree, "graph is not connected");

  for (const auto& g : raw.gateways) {
    if (incident[g.id].size() != 1) fail(ErrorKind::NotATree, "gateway " + std::to_string(g.id) + " must be a leaf");
  }
  std::vector<NodeId> degree3;
  for (const auto& n : raw.nodes) {
    const auto deg = incident[n.id].size();
    if (deg == 1) fail(ErrorKind::NotATree, "leaf " + std::to_string(n.id) + " is not a gateway");
    if (deg == 3) degree3.push_back(n.id);
    if (deg > 3) fail(ErrorKind::NotATree, "node " + std::to_string(n.id) + " has degree > 3");
  }
  if (degree3.empty()) fail(ErrorKind::NoDegree3Node, "no central node of degree 3");
  if (degree3.size() > 1) fail(ErrorKind::NotATree, "more than one degree-3 node");
  t.central_ = degree3.front();

  for (std::size_t gi = 0; gi < 3; ++gi) {
    // Walk from the central node along the unique path to this gateway.
    std::map<NodeId, LinkId> via;
    std::map<NodeId, NodeId> parent;
    std::queue<NodeId> q;
    q.push(t.central_);
    parent[t.central_] = t.central_;
    while (!q.empty()) {
      NodeId v = q.front();
      q.pop();
      for (LinkId l : incident[v]) {
        NodeId w = t.other_end(l, v);
        if (parent.count(w)) continue;
        parent[w] = v;
        via[w] = l;
        q.push(w);
      }
    }
    Branch branch;
    branch.gateway = raw.gateways[gi].id;
    std::vector<NodeId> path;
    for (NodeId v = branch.gateway; v != t.central_; v = parent[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    for (NodeId v : path) {
      branch.links.push_back(via[v]);
      if (v != branch.gateway) branch.nodes.push_back(v);
    }
    t.branches_[gi] = std::move(branch);
  }
  return t;
}

namespace {

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

}  // namespace

TopologySpec parse_topology_spec(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::InvalidConfig, "parse error at line " + std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
  }
  TopologySpec spec;
  try {
    spec.name = doc.value("name", std::string{});
    spec.cycle_slots = doc.at("cycle_slots").get<int>();
    for (const auto& n : doc.at("nodes")) spec.nodes.push_back({n.at("id").get<int>(), n.value("rate", 1)});
    for (const auto& g : doc.at("gateways")) spec.gateways.push_back({g.at("id").get<int>(), g.value("name", std::string{})});
    for (const auto& l : doc.at("links")) {
      spec.links.push_back({l.at("id").get<int>(), l.at("a").get<int>(), l.at("b").get<int>(), l.at("loss").get<double>()});
    }
    for (const auto& p : doc.value("proximity", json::array())) {
      if (!p.is_array() || p.size() != 2) fail(ErrorKind::InvalidConfig, "proximity entries must be [a, b] pairs");
      spec.proximity.emplace_back(p[0].get<int>(), p[1].get<int>());
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidConfig, std::string("malformed topology: ") + e.what());
  }
  return spec;
}

TopologySpec load_topology_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidConfig, "cannot open topology file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_topology_spec(buf.str());
}

bool interferes(const Topology& topology, const Transmission& a, const Transmission& b) {
  if (a == b) return false;
  if (a.tx == b.tx || a.rx == b.rx || a.tx == b.rx || b.tx == a.rx) return true;
  return topology.in_proximity(b.tx, a.rx) || topology.in_proximity(a.tx, b.rx);
}

bool ConflictSet::conflicts(const Transmission& a, const Transmission& b) const {
  return pairs_.count(a < b ? std::pair{a, b} : std::pair{b, a}) != 0;
}

ConflictSet derive_conflicts(const Topology& topology) {
  ConflictSet set;
  for (const auto& l : topology.links()) {
    if (!topology.is_gateway(l.a)) set.transmissions_.push_back({l.a, l.b, l.id});
    if (!topology.is_gateway(l.b)) set.transmissions_.push_back({l.b, l.a, l.id});
  }
  std::sort(set.transmissions_.begin(), set.transmissions_.end());
  const auto& all = set.transmissions_;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (interferes(topology, all[i], all[j])) set.pairs_.emplace(all[i], all[j]);
    }
  }
  return set;
}

}  // namespace yslot
