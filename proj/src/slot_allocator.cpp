#include "yslot/slot_allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace yslot {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double unit_log(double q, int s) { return s <= 0 ? kNegInf : std::log1p(-std::pow(q, s)); }

struct UnitRef {
  UnitKey key;
  double q = 0.0;
  double relaxed = 0.0;
};

// Units in tie-break priority: upstream origin first, then route order, then packet.
std::vector<UnitRef> chain_units(const GroupChain& chain, const RelaxedSolution* relaxed) {
  std::vector<UnitRef> out;
  for (const auto& o : chain.origins) {
    for (LinkId l : o.route) {
      double r = 1.0;
      if (relaxed) {
        auto it = relaxed->slots.find({o.node, l});
        if (it != relaxed->slots.end()) r = it->second;
      }
      for (int k = 0; k < o.rate; ++k) out.push_back({{o.node, l, k}, chain.loss.at(l), r});
    }
  }
  return out;
}

double gain(const UnitRef& u, int s) { return unit_log(u.q, s + 1) - unit_log(u.q, s); }
double loss(const UnitRef& u, int s) { return s <= 1 ? std::numeric_limits<double>::infinity() : unit_log(u.q, s) - unit_log(u.q, s - 1); }

}  // namespace

IntegerChainAllocation round_allocation(const GroupChain& chain, int budget) {
  return round_allocation(chain, solve_group_relaxed(chain, std::max(0, budget)), budget);
}

IntegerChainAllocation round_allocation(const GroupChain& chain, const RelaxedSolution& relaxed, int budget) {
  IntegerChainAllocation out;
  out.budget = budget;
  const auto units = chain_units(chain, &relaxed);
  const int n = static_cast<int>(units.size());
  if (n == 0) return out;

  if (budget < n) {
    out.feasible = false;
    for (int i = 0; i < n; ++i) out.units[units[i].key] = i < budget ? 1 : 0;
    out.log_product = kNegInf;
    out.product = 0.0;
    return out;
  }

  std::vector<int> s(n);
  int used = 0;
  for (int i = 0; i < n; ++i) {
    s[i] = std::max(1, static_cast<int>(std::floor(units[i].relaxed + 1e-9)));
    used += s[i];
  }
  while (used > budget) {
    int pick = -1;
    for (int i = n - 1; i >= 0; --i) {
      if (s[i] > 1 && (pick < 0 || loss(units[i], s[i]) < loss(units[pick], s[pick]))) pick = i;
    }
    --s[pick];
    --used;
  }
  while (used < budget) {
    int pick = 0;
    for (int i = 1; i < n; ++i) {
      if (gain(units[i], s[i]) > gain(units[pick], s[pick])) pick = i;
    }
    ++s[pick];
    ++used;
  }
  // Exchange polish. The objective is separable and concave in each unit, so
  // no improving single-slot move means the allocation is optimal.
  for (int guard = 0; guard < 100000; ++guard) {
    int add = -1, take = -1;
    double best = 1e-14;
    for (int i = 0; i < n; ++i) {
      const double g = gain(units[i], s[i]);
      for (int j = 0; j < n; ++j) {
        if (i == j || s[j] <= 1) continue;
        const double d = g - loss(units[j], s[j]);
        if (d > best) {
          best = d;
          add = i;
          take = j;
        }
      }
    }
    if (add < 0) break;
    ++s[add];
    --s[take];
  }

  double lp = 0.0;
  for (int i = 0; i < n; ++i) {
    out.units[units[i].key] = s[i];
    lp += unit_log(units[i].q, s[i]);
  }
  out.log_product = lp;
  out.product = std::exp(lp);
  return out;
}

GroupChain chain_for(const PathModel& model, const Topology& topology, GroupLabel label, double budget) {
  GroupChain chain;
  chain.budget = budget;
  for (NodeId n : model.group(label).nodes) {
    ChainOrigin o{n, topology.rate(n), model.routes.at(n)};
    for (LinkId l : o.route) chain.loss[l] = topology.loss(l);
    chain.origins.push_back(std::move(o));
  }
  return chain;
}

template <class V>
const GroupPlan<V>* Allocation<V>::group(GroupLabel label) const {
  for (const auto& g : groups) {
    if (g.label == label) return &g;
  }
  return nullptr;
}

template <class V>
std::map<UnitKey, V> Allocation<V>::totals() const {
  std::map<UnitKey, V> out;
  for (const auto& g : groups) {
    for (const auto& [k, u] : g.units) out[k] += u.total();
  }
  return out;
}

namespace {

struct UnitOrder {
  int rank = 0;   // origin position, most upstream first
  int hop = 0;    // position of the link in the origin's route
  int depth = 0;  // links from here to the gateway
};

UnitOrder order_of(const PathModel& model, const UnitKey& k) {
  const auto& nodes = model.group(model.group_of.at(k.origin)).nodes;
  const auto& route = model.routes.at(k.origin);
  UnitOrder o;
  o.rank = static_cast<int>(std::find(nodes.begin(), nodes.end(), k.origin) - nodes.begin());
  o.hop = static_cast<int>(std::find(route.begin(), route.end(), k.link) - route.begin());
  o.depth = static_cast<int>(route.size()) - o.hop;
  return o;
}

bool fill_before(const PathModel& model, const UnitKey& a, const UnitKey& b) {
  const auto oa = order_of(model, a), ob = order_of(model, b);
  if (oa.hop != ob.hop) return oa.hop < ob.hop;
  if (oa.rank != ob.rank) return oa.rank < ob.rank;
  return a.packet < b.packet;
}

bool serial_before(const PathModel& model, const UnitKey& a, const UnitKey& b) {
  const auto oa = order_of(model, a), ob = order_of(model, b);
  if (oa.depth != ob.depth) return oa.depth > ob.depth;
  if (a.link != b.link) return a.link < b.link;
  if (oa.rank != ob.rank) return oa.rank < ob.rank;
  return a.packet < b.packet;
}

}  // namespace

template <class V>
std::vector<Burst<V>> layout_group(const GroupPlan<V>& plan, const PathModel& model) {
  std::vector<UnitKey> early, heads, serial;
  for (const auto& [k, u] : plan.units) {
    if (u.early > V{}) early.push_back(k);
    if (plan.heads.count(k.pair())) {
      heads.push_back(k);
    } else if (u.serial > V{}) {
      serial.push_back(k);
    }
  }
  std::sort(early.begin(), early.end(), [&](const UnitKey& a, const UnitKey& b) { return fill_before(model, a, b); });
  std::sort(heads.begin(), heads.end(), [&](const UnitKey& a, const UnitKey& b) {
    const auto oa = order_of(model, a), ob = order_of(model, b);
    return oa.rank != ob.rank ? oa.rank < ob.rank : a.packet < b.packet;
  });
  std::sort(serial.begin(), serial.end(), [&](const UnitKey& a, const UnitKey& b) { return serial_before(model, a, b); });

  std::vector<Burst<V>> out;
  auto emit = [&](const UnitKey& k, bool is_early, V start, V len) {
    out.push_back(Burst<V>{model.link_use.at(k.link), k.origin, k.packet, is_early, start, len});
  };
  V cursor{};
  for (const auto& k : early) {
    emit(k, true, cursor, plan.units.at(k).early);
    cursor += plan.units.at(k).early;
  }
  cursor = plan.window;
  for (const auto& k : heads) {
    const V len = plan.units.at(k).serial;
    if (len > V{}) emit(k, false, cursor, len);
    cursor += len;
  }
  cursor = plan.lane;
  for (const auto& k : serial) {
    emit(k, false, cursor, plan.units.at(k).serial);
    cursor += plan.units.at(k).serial;
  }
  return out;
}

template <class V>
V early_window(const std::vector<Transmission>& group_tx, const std::vector<Burst<V>>& earlier, const ConflictSet& conflicts) {
  V a{};
  for (const auto& b : earlier) {
    if (!(b.length > V{})) continue;
    for (const auto& t : group_tx) {
      if (t == b.tx || conflicts.conflicts(t, b.tx)) {
        a = std::max(a, b.end());
        break;
      }
    }
  }
  return a;
}

std::set<PairKey> eligible_pairs(const PathModel& model, GroupLabel label, const std::vector<Transmission>& blockers,
                                 const ConflictSet& conflicts) {
  std::set<PairKey> out;
  for (NodeId n : model.group(label).nodes) {
    for (LinkId l : model.routes.at(n)) {
      const auto& t = model.link_use.at(l);
      const bool blocked = std::any_of(blockers.begin(), blockers.end(),
                                       [&](const Transmission& b) { return b == t || conflicts.conflicts(b, t); });
      if (blocked) break;
      out.insert({n, l});
    }
  }
  return out;
}

std::set<PairKey> head_pairs(const PathModel& model, GroupLabel label) {
  std::set<NodeId> receivers;
  for (const auto& t : group_transmissions(model, label)) receivers.insert(t.rx);
  std::set<PairKey> out;
  for (NodeId n : model.group(label).nodes) {
    if (!receivers.count(n)) out.insert({n, model.routes.at(n).front()});
  }
  return out;
}

template <class V>
int assign_early_slots(GroupPlan<V>& plan, const PathModel& model) {
  std::vector<UnitKey> order;
  for (auto& [k, u] : plan.units) {
    u.serial = u.total();
    u.early = V{};
    if (plan.eligible.count(k.pair())) order.push_back(k);
  }
  std::sort(order.begin(), order.end(), [&](const UnitKey& a, const UnitKey& b) { return fill_before(model, a, b); });
  V left = plan.lane;
  int touched = 0;
  for (const auto& k : order) {
    if (!(left > V{})) break;
    auto& u = plan.units.at(k);
    const V e = std::min(u.serial, left);
    if (!(e > V{})) continue;
    u.early = e;
    u.serial -= e;
    left -= e;
    ++touched;
  }
  return touched;
}

LaneInteger solve_lane_integer(const GroupChain& n, const GroupChain& h, const GroupChain& e, int cycle, int window) {
  LaneInteger best;
  best.log_product = kNegInf;
  const int open = cycle - window;
  std::map<int, IntegerChainAllocation> memo_n, memo_h, memo_e;
  auto get = [](std::map<int, IntegerChainAllocation>& memo, const GroupChain& c, int b) -> const IntegerChainAllocation& {
    auto it = memo.find(b);
    if (it == memo.end()) it = memo.emplace(b, round_allocation(c, std::max(0, b))).first;
    return it->second;
  };
  const int lo = 0;
  const int hi = n.empty() ? 0 : std::max(0, open);
  bool any = false;
  for (int x = lo; x <= hi; ++x) {
    const auto& an = get(memo_n, n, x);
    const auto& ah = get(memo_h, h, open - x);
    const auto& ae = get(memo_e, e, cycle - x);
    double lp = an.log_product + ah.log_product + ae.log_product;
    if ((!n.empty() || !h.empty()) && open < 0) lp = kNegInf;
    if (!any || lp > best.log_product) {
      any = true;
      best.x = x;
      best.n = an;
      best.h = ah;
      best.e = ae;
      best.log_product = lp;
    }
  }
  best.feasible = best.log_product > kNegInf;
  return best;
}

namespace {

std::set<PairKey> minus(const std::set<PairKey>& a, const std::set<PairKey>& b) {
  std::set<PairKey> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

int unit_sum(const IntegerChainAllocation& alloc, const std::set<PairKey>& pairs) {
  int total = 0;
  for (const auto& [k, s] : alloc.units) {
    if (pairs.count(k.pair())) total += s;
  }
  return total;
}

}  // namespace

OrientationCandidates orientation_candidates(const GroupChain& full, const std::set<PairKey>& heads,
                                             const std::set<PairKey>& early, int cycle, int window) {
  const auto all = chain_pairs(full);
  OrientationCandidates out;

  const auto rest = round_allocation(restrict_chain(full, minus(all, heads), cycle), cycle);
  const int head_budget = unit_sum(rest, early) - window;
  const auto head_chain = restrict_chain(full, heads, head_budget);
  out.heads_hidden = head_budget < head_chain.unit_count() ? kNegInf
                                                           : rest.log_product + round_allocation(head_chain, head_budget).log_product;

  const int open = cycle - window;
  const auto front_chain = restrict_chain(full, minus(all, early), open);
  if (open < front_chain.unit_count()) {
    out.early_hidden = kNegInf;
  } else {
    const auto front = round_allocation(front_chain, open);
    const int lane = window + unit_sum(front, heads);
    out.early_hidden = front.log_product + round_allocation(restrict_chain(full, early, lane), lane).log_product;
  }
  return out;
}

ReferenceSplit reference_three_node_split(const GroupChain& chain, int cycle, int window) {
  if (chain.origins.size() != 3 || chain.origins[0].route.size() != 3) {
    throw Error(ErrorKind::UnknownModel, "reference split needs a three-origin line");
  }
  const NodeId u = chain.origins[0].node, m = chain.origins[1].node, t = chain.origins[2].node;
  const LinkId l1 = chain.origins[0].route[0], l2 = chain.origins[0].route[1], l3 = chain.origins[0].route[2];
  const auto tentative = round_allocation(chain, cycle);
  const int b1 = tentative.units.at({u, l1, 0});
  const int b2 = tentative.units.at({u, l2, 0});
  const int b3 = tentative.units.at({u, l3, 0});
  const int a = window;

  ReferenceSplit r;
  auto set = [&](NodeId o, LinkId l, int early, int serial) { r.slots[{o, l}] = UnitSlots<int>{early, serial}; };
  set(u, l1, 0, b1);
  set(u, l2, 0, b2);
  set(u, l3, 0, b3);
  if (b2 >= a) {
    r.label = "c1";
    set(m, l2, a, b2 - a);
    set(m, l3, 0, b3);
    set(t, l3, 0, b3);
  } else if (b3 >= a) {
    r.label = "c2";
    set(m, l2, 0, b2);
    set(m, l3, 0, b3);
    set(t, l3, a, b3 - a);
  } else if (b2 + b3 >= a) {
    r.label = "c3";
    set(m, l2, b2, 0);
    set(m, l3, 0, b3);
    set(t, l3, a - b2, b3 - (a - b2));
  } else if (b2 + 2 * b3 >= a) {
    r.label = "c4";
    set(m, l2, b2, 0);
    set(t, l3, b3, 0);
    set(m, l3, a - (b3 + b2), b3 - (a - (b3 + b2)));
  } else {
    r.label = "c5";
    GroupChain inner;
    inner.loss = chain.loss;
    inner.origins = {chain.origins[1], chain.origins[2]};
    const auto in = round_allocation(inner, a);
    set(m, l2, in.units.at({m, l2, 0}), 0);
    set(m, l3, in.units.at({m, l3, 0}), 0);
    set(t, l3, in.units.at({t, l3, 0}), 0);
    GroupChain head;
    head.loss = chain.loss;
    head.origins = {chain.origins[0]};
    const auto hd = round_allocation(head, cycle - a);
    set(u, l1, 0, hd.units.at({u, l1, 0}));
    set(u, l2, 0, hd.units.at({u, l2, 0}));
    set(u, l3, 0, hd.units.at({u, l3, 0}));
  }
  return r;
}

ComResult com_probability(const std::map<UnitKey, int>& totals, const PathModel& model, const Topology& topology) {
  ComResult out;
  for (const auto& [node, route] : model.routes) {
    double m = 1.0;
    for (int k = 0; k < topology.rate(node); ++k) {
      for (LinkId l : route) {
        auto it = totals.find({node, l, k});
        const int s = it == totals.end() ? 0 : it->second;
        m *= s <= 0 ? 0.0 : -std::expm1(s * std::log(topology.loss(l)));
      }
    }
    out.per_node[node] = m;
    out.product *= m;
  }
  return out;
}

ComResult com_probability(const SlotAllocation& alloc, const PathModel& model, const Topology& topology) {
  return com_probability(alloc.totals(), model, topology);
}

namespace {

struct Variant {
  std::string name;
  std::set<PairKey> heads;
  std::set<PairKey> early;
};

template <class V>
GroupPlan<V> make_plan(GroupLabel label, int tier, const Variant& v, V window, const std::set<PairKey>& all,
                       const RelaxedSolution* n, const RelaxedSolution* h, const RelaxedSolution* e,
                       const IntegerChainAllocation* in, const IntegerChainAllocation* ih, const IntegerChainAllocation* ie,
                       const Topology& topology) {
  GroupPlan<V> plan;
  plan.label = label;
  plan.tier = tier;
  plan.variant = v.name;
  plan.window = window;
  plan.heads = v.heads;
  plan.eligible = v.early;
  V head_total{};
  for (const auto& p : all) {
    for (int k = 0; k < topology.rate(p.origin); ++k) {
      V value{};
      if constexpr (std::is_same_v<V, double>) {
        const RelaxedSolution* src = v.heads.count(p) ? h : v.early.count(p) ? e : n;
        // Infeasible lanes come back without slots.
        if (auto it = src->slots.find(p); it != src->slots.end()) value = it->second;
      } else {
        const IntegerChainAllocation* src = v.heads.count(p) ? ih : v.early.count(p) ? ie : in;
        if (auto it = src->units.find({p.origin, p.link, k}); it != src->units.end()) value = it->second;
      }
      plan.units[{p.origin, p.link, k}] = UnitSlots<V>{V{}, value};
      if (v.heads.count(p)) head_total += value;
    }
  }
  plan.lane = window + head_total;
  return plan;
}

template <class V>
std::string fill_label(const GroupPlan<V>& plan, int touched) {
  if (!(plan.window > V{})) return "-";
  if (plan.eligible.empty()) return "serial";
  V eligible_total{};
  for (const auto& [k, u] : plan.units) {
    if (plan.eligible.count(k.pair())) eligible_total += u.total();
  }
  if (eligible_total < plan.lane) return "c5";
  if (touched <= 1) return "c1";
  if (touched == 2) return "c3";
  return "c4";
}

double per_node_log(const std::map<UnitKey, double>& totals, NodeId node, const std::vector<LinkId>& route,
                    const Topology& topology) {
  double lp = 0.0;
  for (int k = 0; k < topology.rate(node); ++k) {
    for (LinkId l : route) {
      auto it = totals.find({node, l, k});
      const double s = it == totals.end() ? 0.0 : it->second;
      if (s <= 0.0) return kNegInf;
      lp += std::log1p(-std::pow(topology.loss(l), s));
    }
  }
  return lp;
}

}  // namespace

PatternSolution solve_pattern(const PathModel& model, const PatternSpec& pattern, const Topology& topology,
                              const ConflictSet& conflicts) {
  PatternSolution sol;
  sol.model = model;
  sol.pattern = pattern;
  const int cycle = topology.cycle_slots();
  sol.cycle_slots = cycle;

  std::vector<Burst<double>> placed_r;
  std::vector<Burst<int>> placed_i;
  std::vector<Transmission> placed_tx;

  auto solve_group = [&](GroupLabel label, int tier) {
    const auto full = chain_for(model, topology, label, cycle);
    const auto all = chain_pairs(full);
    const auto tx = group_transmissions(model, label);
    const double a_r = early_window(tx, placed_r, conflicts);
    const int a_i = early_window(tx, placed_i, conflicts);
    // Evaluating the relaxed lane at the smaller window keeps it an upper
    // bound of the integer lane.
    const double a_eff = std::min(a_r, static_cast<double>(a_i));

    std::vector<Variant> variants;
    const auto e_window = eligible_pairs(model, label, placed_tx, conflicts);
    variants.push_back({"window", {}, e_window});
    const auto heads = head_pairs(model, label);
    if (!heads.empty()) {
      std::vector<Transmission> head_tx;
      for (const auto& p : heads) head_tx.push_back(model.link_use.at(p.link));
      std::set<PairKey> e_heads;
      for (const auto& p : eligible_pairs(model, label, head_tx, conflicts)) {
        if (e_window.count(p) && !heads.count(p)) e_heads.insert(p);
      }
      if (!e_heads.empty()) variants.push_back({"heads", heads, e_heads});
    }

    std::optional<GroupPlan<double>> best_r;
    std::optional<GroupPlan<int>> best_i;
    const Variant* best_i_variant = nullptr;
    for (const auto& v : variants) {
      const auto n_pairs = minus(minus(all, v.heads), v.early);
      const auto nc = restrict_chain(full, n_pairs, 0);
      const auto hc = restrict_chain(full, v.heads, 0);
      const auto ec = restrict_chain(full, v.early, 0);

      const auto lr = solve_lane_relaxed(nc, hc, ec, cycle, a_eff);
      auto pr = make_plan<double>(label, tier, v, a_eff, all, &lr.n, &lr.h, &lr.e, nullptr, nullptr, nullptr, topology);
      pr.log_product = lr.log_product;
      pr.feasible = lr.feasible && lr.log_product > kNegInf;
      const int tr = assign_early_slots(pr, model);
      pr.case_label = v.heads.empty() ? fill_label(pr, tr) : "heads";
      if (!best_r || pr.log_product > best_r->log_product) best_r = std::move(pr);

      const auto li = solve_lane_integer(nc, hc, ec, cycle, a_i);
      auto pi = make_plan<int>(label, tier, v, a_i, all, nullptr, nullptr, nullptr, &li.n, &li.h, &li.e, topology);
      pi.log_product = li.log_product;
      pi.feasible = li.feasible;
      const int ti = assign_early_slots(pi, model);
      pi.case_label = fill_label(pi, ti);
      if (!best_i || pi.log_product > best_i->log_product) {
        best_i = std::move(pi);
        best_i_variant = &v;
      }
    }

    if (best_i->variant == "heads") {
      const bool multi = best_i_variant->heads.size() > 1;
      const auto oc = orientation_candidates(full, best_i_variant->heads, best_i_variant->early, cycle, a_i);
      const bool hidden_heads = oc.heads_hidden >= oc.early_hidden;
      best_i->case_label = multi ? (hidden_heads ? "caseA" : "caseB") : (hidden_heads ? "case1" : "case2");
      double q_head = 0.0;
      for (const auto& p : best_i_variant->heads) q_head = std::max(q_head, topology.loss(p.link));
      const double q_terminal = topology.loss(full.origins.front().route.back());
      const bool predict_hidden = q_terminal >= q_head;
      best_i->predicted = multi ? (predict_hidden ? "caseA" : "caseB") : (predict_hidden ? "case1" : "case2");
    }
    return std::pair{std::move(*best_r), std::move(*best_i)};
  };

  auto take = [&](std::pair<GroupPlan<double>, GroupPlan<int>> plans, std::vector<Burst<double>>& br,
                  std::vector<Burst<int>>& bi) {
    for (const auto& b : layout_group(plans.first, model)) br.push_back(b);
    for (const auto& b : layout_group(plans.second, model)) bi.push_back(b);
    sol.relaxed.groups.push_back(std::move(plans.first));
    sol.integer.groups.push_back(std::move(plans.second));
  };

  std::vector<Burst<double>> scratch_r;
  std::vector<Burst<int>> scratch_i;
  for (GroupLabel g : pattern.independent) take(solve_group(g, -1), scratch_r, scratch_i);
  for (std::size_t t = 0; t < pattern.tiers.size(); ++t) {
    std::vector<Burst<double>> tier_r;
    std::vector<Burst<int>> tier_i;
    for (GroupLabel g : pattern.tiers[t]) take(solve_group(g, static_cast<int>(t)), tier_r, tier_i);
    placed_r.insert(placed_r.end(), tier_r.begin(), tier_r.end());
    placed_i.insert(placed_i.end(), tier_i.begin(), tier_i.end());
    for (GroupLabel g : pattern.tiers[t]) {
      const auto tx = group_transmissions(model, g);
      placed_tx.insert(placed_tx.end(), tx.begin(), tx.end());
    }
  }

  double lr = 0.0, li = 0.0;
  std::vector<std::string> labels, predicted;
  for (const auto& g : sol.relaxed.groups) lr += g.log_product;
  for (const auto& g : sol.integer.groups) {
    li += g.log_product;
    sol.feasible = sol.feasible && g.feasible;
    if (g.case_label != "-" && std::find(labels.begin(), labels.end(), g.case_label) == labels.end()) labels.push_back(g.case_label);
    if (!g.predicted.empty()) predicted.push_back(g.predicted);
  }
  sol.relaxed.log_product = lr;
  sol.relaxed.product = std::exp(lr);
  sol.integer.log_product = li;
  sol.integer.product = std::exp(li);
  sol.tub = sol.relaxed.product;

  const auto com = com_probability(sol.integer, model, topology);
  sol.com = com.product;
  sol.node_com = com.per_node;
  const auto rt = sol.relaxed.totals();
  for (const auto& [node, route] : model.routes) sol.node_tub[node] = std::exp(per_node_log(rt, node, route, topology));

  sol.case_label = labels.empty() ? "-" : labels.front();
  for (std::size_t i = 1; i < labels.size(); ++i) sol.case_label += "+" + labels[i];
  for (std::size_t i = 0; i < predicted.size(); ++i) sol.predicted_orientation += (i ? "+" : "") + predicted[i];
  return sol;
}

std::vector<PatternSolution> optimize(const Topology& topology, std::optional<int> fixed_z) {
  const auto conflicts = derive_conflicts(topology);
  std::vector<PatternSolution> out;
  for (const auto& model : enumerate_path_models(topology, fixed_z)) {
    for (const auto& pattern : patterns_for(model, conflicts)) out.push_back(solve_pattern(model, pattern, topology, conflicts));
  }
  std::stable_sort(out.begin(), out.end(), [](const PatternSolution& a, const PatternSolution& b) {
    if (a.com != b.com) return a.com > b.com;
    if (a.tub != b.tub) return a.tub > b.tub;
    if (a.model.id() != b.model.id()) return a.model.id() < b.model.id();
    return a.pattern.id < b.pattern.id;
  });
  return out;
}

template struct Allocation<int>;
template struct Allocation<double>;
template std::vector<Burst<int>> layout_group(const GroupPlan<int>&, const PathModel&);
template std::vector<Burst<double>> layout_group(const GroupPlan<double>&, const PathModel&);
template int early_window(const std::vector<Transmission>&, const std::vector<Burst<int>>&, const ConflictSet&);
template double early_window(const std::vector<Transmission>&, const std::vector<Burst<double>>&, const ConflictSet&);
template int assign_early_slots(GroupPlan<int>&, const PathModel&);
template int assign_early_slots(GroupPlan<double>&, const PathModel&);

}  // namespace yslot
