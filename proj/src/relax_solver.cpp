#include "yslot/relax_solver.hpp"

#include <cmath>
#include <limits>

namespace yslot {

namespace {

void check_loss(double q) {
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorKind::DomainError, "loss rate must lie in (0,1)");
}

// F written in terms of u = log y, so very large adjuncts do not overflow.
double ffun_log(double q, double u) {
  const double c = -std::log(q);
  const double z = u + std::log(c);
  const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
  return softplus / c;
}

double budget_at(const std::vector<std::pair<double, int>>& terms, double u) {
  double sum = 0.0;
  for (const auto& [q, c] : terms) sum += c * ffun_log(q, u);
  return sum;
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

double gfun(double q, double x) {
  check_loss(q);
  if (!(x > 0.0)) throw Error(ErrorKind::DomainError, "gfun needs x > 0");
  const double lq = std::log(q);
  return -std::exp(x * lq) * lq / -std::expm1(x * lq);
}

double ffun(double q, double y) {
  check_loss(q);
  if (!(y >= 0.0)) throw Error(ErrorKind::DomainError, "ffun needs y >= 0");
  const double lq = std::log(q);
  return -std::log1p(-y * lq) / lq;
}

std::size_t GroupChain::pair_count() const {
  std::size_t n = 0;
  for (const auto& o : origins) n += o.route.size();
  return n;
}

int GroupChain::unit_count() const {
  int n = 0;
  for (const auto& o : origins) n += o.rate * static_cast<int>(o.route.size());
  return n;
}

std::vector<std::pair<LinkId, int>> budget_terms(const GroupChain& chain) {
  std::map<LinkId, int> coeff;
  for (const auto& o : chain.origins) {
    for (LinkId l : o.route) coeff[l] += o.rate;
  }
  return {coeff.begin(), coeff.end()};
}

double chain_log_product(const GroupChain& chain, const std::map<PairKey, double>& slots) {
  double total = 0.0;
  for (const auto& o : chain.origins) {
    for (LinkId l : o.route) {
      const double s = slots.at({o.node, l});
      if (s <= 0.0) return kNegInf;
      total += o.rate * std::log1p(-std::pow(chain.loss.at(l), s));
    }
  }
  return total;
}

RelaxedSolution solve_group_relaxed(const GroupChain& chain) { return solve_group_relaxed(chain, chain.budget); }

RelaxedSolution solve_group_relaxed(const GroupChain& chain, double budget) {
  RelaxedSolution sol;
  sol.budget = budget;
  if (chain.empty()) return sol;
  if (budget < 0.0) throw Error(ErrorKind::DomainError, "negative budget");
  const auto coeffs = budget_terms(chain);
  std::vector<std::pair<double, int>> terms;
  for (const auto& [l, c] : coeffs) {
    const double q = chain.loss.at(l);
    check_loss(q);
    terms.emplace_back(q, c);
  }
  if (budget == 0.0) {
    for (const auto& o : chain.origins) {
      for (LinkId l : o.route) sol.slots[{o.node, l}] = 0.0;
    }
    sol.tub_product = 0.0;
    sol.log_product = kNegInf;
    return sol;
  }

  double lo = -1.0, hi = 1.0;
  while (budget_at(terms, lo) > budget) lo = 2.0 * lo - 1.0;
  while (budget_at(terms, hi) < budget) hi = 2.0 * hi + 1.0;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (budget_at(terms, mid) < budget ? lo : hi) = mid;
  }
  const double u = 0.5 * (lo + hi);

  double used = 0.0;
  for (const auto& o : chain.origins) {
    for (LinkId l : o.route) {
      const double s = ffun_log(chain.loss.at(l), u);
      sol.slots[{o.node, l}] = s;
      used += o.rate * s;
    }
  }
  sol.adjunct = std::exp(u);
  sol.residual = std::abs(used - budget) / std::max(1.0, budget);
  if (sol.residual > 1e-9) {
    throw Error(ErrorKind::ConvergenceError, "budget residual " + std::to_string(sol.residual));
  }
  sol.log_product = chain_log_product(chain, sol.slots);
  sol.tub_product = std::exp(sol.log_product);
  return sol;
}

GroupChain restrict_chain(const GroupChain& chain, const std::set<PairKey>& keep, double budget) {
  GroupChain out;
  out.loss = chain.loss;
  out.budget = budget;
  for (const auto& o : chain.origins) {
    ChainOrigin c{o.node, o.rate, {}};
    for (LinkId l : o.route) {
      if (keep.count({o.node, l})) c.route.push_back(l);
    }
    if (!c.route.empty()) out.origins.push_back(std::move(c));
  }
  return out;
}

std::set<PairKey> chain_pairs(const GroupChain& chain) {
  std::set<PairKey> out;
  for (const auto& o : chain.origins) {
    for (LinkId l : o.route) out.insert({o.node, l});
  }
  return out;
}

namespace {

// Lagrange multiplier 1/y of a chain at the given budget; +inf when starved.
double multiplier(const GroupChain& chain, double budget) {
  if (chain.empty()) return 0.0;
  if (budget <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / solve_group_relaxed(chain, budget).adjunct;
}

}  // namespace

LaneRelaxed solve_lane_relaxed(const GroupChain& n, const GroupChain& h, const GroupChain& e, double cycle, double window) {
  LaneRelaxed out;
  const double open = cycle - window;
  if ((!n.empty() || !h.empty()) && open <= 0.0) {
    out.feasible = false;
    out.log_product = kNegInf;
    return out;
  }

  double x = 0.0;
  if (!n.empty()) {
    auto slope = [&](double v) { return multiplier(n, v) - multiplier(h, open - v) - multiplier(e, cycle - v); };
    if (h.empty() && slope(open) >= 0.0) {
      x = open;
      out.binding = true;
    } else {
      // g is concave in x, so bisect on the sign of g'.
      double lo = 0.0, hi = open;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (slope(mid) > 0.0 ? lo : hi) = mid;
      }
      x = 0.5 * (lo + hi);
    }
  }
  out.x = x;
  out.n = solve_group_relaxed(n, x);
  out.h = solve_group_relaxed(h, open - x);
  out.e = solve_group_relaxed(e, cycle - x);
  out.log_product = out.n.log_product + out.h.log_product + out.e.log_product;
  return out;
}

}  // namespace yslot
