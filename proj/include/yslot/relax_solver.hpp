#pragma once

#include <compare>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "yslot/net_model.hpp"

namespace yslot {

/// G(q, x) = -q^x log q / (1 - q^x): marginal log-gain of the x-th slot.
double gfun(double q, double x);
/// F(q, y) = -log(1 - y log q) / log q, the inverse of G in the sense
/// G(q, F(q, y)) = 1/y.
double ffun(double q, double y);

struct PairKey {
  NodeId origin = 0;
  LinkId link = 0;
  auto operator<=>(const PairKey&) const = default;
};

struct ChainOrigin {
  NodeId node = 0;
  int rate = 1;
  std::vector<LinkId> route;  // toward the gateway
};

/// Origins most-upstream first. Sub-chains built by restrict_chain may hold
/// any subset of (origin, link) pairs.
struct GroupChain {
  std::vector<ChainOrigin> origins;
  std::map<LinkId, double> loss;
  double budget = 0.0;

  bool empty() const { return origins.empty(); }
  std::size_t pair_count() const;
  /// Unit count: pairs weighted by origin rate.
  int unit_count() const;
};

struct RelaxedSolution {
  std::map<PairKey, double> slots;
  double adjunct = 0.0;      // y with s = F(q, y); 1/y is the multiplier
  double tub_product = 1.0;  // prod_i M_i^{r_i}
  double log_product = 0.0;
  double residual = 0.0;
  double budget = 0.0;
};

/// (link, sum of rates of origins using it), by link id.
std::vector<std::pair<LinkId, int>> budget_terms(const GroupChain& chain);

RelaxedSolution solve_group_relaxed(const GroupChain& chain);
/// Same chain with another budget.
RelaxedSolution solve_group_relaxed(const GroupChain& chain, double budget);

/// Log of prod_i M_i^{r_i} for real slot counts.
double chain_log_product(const GroupChain& chain, const std::map<PairKey, double>& slots);

GroupChain restrict_chain(const GroupChain& chain, const std::set<PairKey>& keep, double budget);

std::set<PairKey> chain_pairs(const GroupChain& chain);

/// Solution of a group whose pairs split into N (serialized after the
/// window), H (heads, hidden under the early pairs) and E (early-eligible).
/// Constraints: sum(N) + sum(E) <= T and sum(N) + sum(H) <= T - a.
struct LaneRelaxed {
  double x = 0.0;  // budget given to N
  RelaxedSolution n, h, e;
  double log_product = 0.0;
  bool binding = false;  // N took the whole T - a
  bool feasible = true;
};

LaneRelaxed solve_lane_relaxed(const GroupChain& n, const GroupChain& h, const GroupChain& e, double cycle, double window);

}  // namespace yslot
