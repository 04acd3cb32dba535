// Acceptance gate: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "yslot/loss_sim.hpp"
#include "yslot/report.hpp"
#include "yslot/schedule_timeline.hpp"
#include "yslot/slot_allocator.hpp"

using namespace yslot;

namespace {

int failures = 0;

void verdict(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s [%2d] %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Topology example(int c, int cycle = 30) {
  return validate_topology(load_topology_spec(std::string(YSLOT_DATA_DIR) + "/example8_case" + std::to_string(c) + ".json"))
      .with_cycle_slots(cycle);
}

std::vector<PatternSolution> solve_model(const Topology& t, const std::string& name) {
  const auto conflicts = derive_conflicts(t);
  const auto m = find_model(t, name);
  std::vector<PatternSolution> out;
  for (const auto& p : patterns_for(m, conflicts)) out.push_back(solve_pattern(m, p, t, conflicts));
  return out;
}

// Table rows as printed: "s[i,j]" / "s'[i,j]" -> value.
std::map<std::string, double> table_row(const PatternSolution& s, const Topology& t, const std::string& row) {
  const auto tab = slot_table(s, t);
  std::map<std::string, double> out;
  for (const auto& r : tab.rows) {
    if (std::get<std::string>(r[0]) != row) continue;
    for (std::size_t c = 1; c < r.size(); ++c) {
      out[tab.columns[c]] = std::holds_alternative<double>(r[c]) ? std::get<double>(r[c])
                                                                 : static_cast<double>(std::get<std::int64_t>(r[c]));
    }
  }
  return out;
}

// Reference slot rows of 3-2-3 at T = 30, loss case 1.
const std::map<std::string, double> kPattern1Tub = {
    {"s[1,1]", 5.5001},  {"s[2,1]", 5.5001},  {"s[2,2]", 3.9999},   {"s[3,1]", 5.5001},  {"s[3,2]", 3.9999},
    {"s[3,3]", 5.5001},  {"s[4,8]", 3.4322},  {"s[4,9]", 6.7617},   {"s[4,10]", 4.3481}, {"s[5,6]", 11.8741},
    {"s[5,7]", 9.0630},  {"s[6,7]", 9.0630},  {"s[7,9]", 0.0},      {"s'[7,9]", 6.7617}, {"s[7,10]", 3.5839},
    {"s'[7,10]", 0.7642}, {"s[8,10]", 0.0},   {"s'[8,10]", 4.3481}, {"s'[1,1]", 0.0},    {"s'[2,1]", 0.0},
    {"s'[2,2]", 0.0},    {"s'[6,7]", 0.0}};
const std::map<std::string, double> kPattern2Tub = {
    {"s[1,1]", 5.5001}, {"s[2,1]", 5.5001},  {"s[2,2]", 0.5677},   {"s'[2,2]", 3.4322}, {"s[3,1]", 5.5001},
    {"s[3,2]", 3.9999}, {"s[3,3]", 5.5001},  {"s[4,8]", 3.4322},   {"s[4,9]", 6.7617},  {"s[4,10]", 4.3481},
    {"s[5,6]", 11.8741}, {"s[5,7]", 9.0630}, {"s[6,7]", 5.6307},   {"s'[6,7]", 3.4322}, {"s[7,9]", 6.7617},
    {"s[7,10]", 4.3481}, {"s[8,10]", 4.3481}, {"s'[7,9]", 0.0},    {"s'[7,10]", 0.0},   {"s'[8,10]", 0.0},
    {"s'[1,1]", 0.0},   {"s'[2,1]", 0.0}};
// Integer rows: (origin, link) -> (early, serial).
const std::map<PairKey, UnitSlots<int>> kPattern1Com = {
    {{1, 1}, {0, 5}}, {{2, 1}, {0, 5}}, {{2, 2}, {0, 4}},  {{3, 1}, {0, 6}}, {{3, 2}, {0, 4}},
    {{3, 3}, {0, 6}}, {{4, 8}, {0, 3}}, {{4, 9}, {0, 7}},  {{4, 10}, {0, 4}}, {{5, 6}, {0, 12}},
    {{5, 7}, {0, 9}}, {{6, 7}, {0, 9}}, {{7, 9}, {7, 0}},  {{7, 10}, {1, 4}}, {{8, 10}, {4, 0}}};
const std::map<PairKey, UnitSlots<int>> kPattern2Com = {
    {{1, 1}, {0, 5}}, {{2, 1}, {0, 5}}, {{2, 2}, {4, 1}}, {{3, 1}, {0, 5}}, {{3, 2}, {0, 4}},
    {{3, 3}, {0, 6}}, {{4, 8}, {0, 4}}, {{4, 9}, {0, 7}}, {{4, 10}, {0, 4}}, {{5, 6}, {0, 12}},
    {{5, 7}, {0, 9}}, {{6, 7}, {4, 5}}, {{7, 9}, {0, 7}}, {{7, 10}, {0, 4}}, {{8, 10}, {0, 4}}};

std::map<UnitKey, int> totals_of(const std::map<PairKey, UnitSlots<int>>& rows) {
  std::map<UnitKey, int> out;
  for (const auto& [k, v] : rows) out[{k.origin, k.link, 0}] = v.total();
  return out;
}

// Replaces the integer slots of `s` by the given totals, keeping its
// windows and eligible sets, and re-runs the early split.
PatternSolution with_integer_totals(PatternSolution s, const std::map<UnitKey, int>& totals) {
  for (auto& g : s.integer.groups) {
    int heads = 0;
    for (auto& [k, u] : g.units) {
      u = UnitSlots<int>{0, totals.at(k)};
      if (g.heads.count(k.pair())) heads += u.serial;
    }
    g.lane = g.window + heads;
    assign_early_slots(g, s.model);
  }
  return s;
}

std::string table_mismatch(const std::map<std::string, double>& got, const std::map<std::string, double>& want, double tol,
                           double* worst) {
  std::string bad;
  *worst = 0.0;
  for (const auto& [k, v] : want) {
    auto it = got.find(k);
    const double d = it == got.end() ? 1e9 : std::abs(it->second - v);
    *worst = std::max(*worst, d);
    if (d > tol) bad += " " + k;
  }
  return bad;
}

bool layout_fits(const PatternSolution& s) {
  for (const auto& g : s.integer.groups) {
    for (const auto& b : layout_group(g, s.model)) {
      if (b.end() > s.cycle_slots) return false;
    }
  }
  return true;
}

void criterion_tables() {
  for (int pat = 1; pat <= 2; ++pat) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto t = example(1);
    const auto sols = solve_model(t, "3-2-3");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto& want = pat == 1 ? kPattern1Tub : kPattern2Tub;
    double worst = 0.0;
    const auto bad = table_mismatch(table_row(sols[pat - 1], t, "TUB"), want, 1e-3, &worst);
    verdict(pat, pat == 1 ? "3-2-3 pattern 1 TUB row" : "3-2-3 pattern 2 TUB row", bad.empty() && secs < 1.0,
            std::to_string(want.size()) + " entries, max |diff| " + fmt("%.2e", worst) + ", " + fmt("%.3f s", secs) +
                (bad.empty() ? "" : ", off:" + bad));
  }
}

void criterion_com() {
  const auto t = example(1);
  const auto sols = solve_model(t, "3-2-3");
  bool ok = true;
  std::string detail;
  for (int pat = 1; pat <= 2; ++pat) {
    const auto& rows = pat == 1 ? kPattern1Com : kPattern2Com;
    const auto& s = sols[pat - 1];
    const double reference = com_probability(totals_of(rows), s.model, t).product;
    const bool fits = layout_fits(s) && verify_timeline(build_timeline(s, derive_conflicts(t), t), derive_conflicts(t), 30).ok;
    ok = ok && s.com >= reference && fits;
    detail += "p" + std::to_string(pat) + " COM " + fmt("%.6f", s.com) + " vs reference " + fmt("%.6f", reference) +
              (fits ? " (fits T=30)" : " (exceeds T=30)") + (pat == 1 ? "; " : "");
  }
  verdict(3, "COM match-or-beat", ok, detail);
}

void criterion_equivalence() {
  double worst = 0.0;
  for (int c = 1; c <= 3; ++c) {
    for (int cycle : {20, 30}) {
      const auto sols = solve_model(example(c, cycle), "3-2-3");
      worst = std::max(worst, std::abs(sols[0].tub - sols[1].tub));
    }
  }
  verdict(4, "3-2-3 pattern TUB equivalence", worst <= 1e-6, "max |TUB1 - TUB2| = " + fmt("%.2e", worst) + " over 3 cases x T{20,30}");
}

double best_com(const Topology& t, const std::string& name) {
  double best = 0.0;
  for (const auto& s : solve_model(t, name)) best = std::max(best, s.com);
  return best;
}

void criterion_ranking() {
  const std::vector<std::string> names = {"3-2-3", "2-2-4", "2-1-5"};
  std::map<int, std::map<std::string, double>> com;
  std::map<int, std::map<std::string, int>> rank;
  for (int c = 1; c <= 3; ++c) {
    const auto t = example(c);
    for (const auto& n : names) com[c][n] = best_com(t, n);
    for (const auto& n : names) {
      int r = 1;
      for (const auto& m : names) r += com[c][m] > com[c][n] ? 1 : 0;
      rank[c][n] = r;
    }
  }
  const bool a = rank[1]["3-2-3"] == 1;
  const bool b = com[1]["2-2-4"] > com[1]["2-1-5"] && com[2]["2-2-4"] > com[2]["2-1-5"];
  const bool c2 = rank[2]["2-2-4"] == 1;
  const bool d = rank[3]["2-1-5"] < rank[1]["2-1-5"];
  std::string detail;
  for (int c = 1; c <= 3; ++c) {
    detail += "case" + std::to_string(c) + " ";
    for (const auto& n : names) detail += n + "=" + fmt("%.4f", com[c][n]) + " ";
  }
  verdict(5, "Ranking reproduction", a && b && c2 && d, detail + "(2-1-5 rank case1 " + std::to_string(rank[1]["2-1-5"]) +
                                                            " -> case3 " + std::to_string(rank[3]["2-1-5"]) + ")");
}

struct Matrix {
  std::vector<std::pair<int, PatternSolution>> solved;  // (case, solution)
};

Matrix solve_matrix() {
  Matrix m;
  for (int c = 1; c <= 3; ++c) {
    for (int cycle : {20, 30}) {
      const auto t = example(c, cycle);
      const auto conflicts = derive_conflicts(t);
      for (const auto& model : enumerate_path_models(t)) {
        for (const auto& p : patterns_for(model, conflicts)) m.solved.emplace_back(c, solve_pattern(model, p, t, conflicts));
      }
    }
  }
  return m;
}

void criterion_monotone(const Matrix& m) {
  std::map<std::tuple<int, std::string, int>, std::map<int, double>> com;
  for (const auto& [c, s] : m.solved) com[{c, s.model.id(), s.pattern.id}][s.cycle_slots] = s.com;
  int bad = 0;
  std::string first;
  for (const auto& [k, v] : com) {
    if (v.at(30) < v.at(20)) {
      if (!bad) first = " first: case" + std::to_string(std::get<0>(k)) + " " + std::get<1>(k) + " p" + std::to_string(std::get<2>(k));
      ++bad;
    }
  }
  verdict(6, "T-monotonicity of COM", bad == 0, std::to_string(com.size()) + " (model, pattern, case) triples, " +
                                                    std::to_string(bad) + " violations" + first);
}

void criterion_fg() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uq(0.01, 0.99), ulog(std::log(1e-3), std::log(1e6));
  double worst = 0.0;
  bool monotone = true, zero = true;
  for (int i = 0; i < 10000; ++i) {
    const double q = uq(rng), y = std::exp(ulog(rng));
    worst = std::max(worst, std::abs(y * gfun(q, ffun(q, y)) - 1.0));
    monotone = monotone && ffun(q, y * 1.001) > ffun(q, y);
    zero = zero && ffun(q, 0.0) == 0.0;
  }
  verdict(7, "F/G property suite", worst <= 1e-10 && monotone && zero,
          "10^4 samples, max |y G(q,F(q,y)) - 1| = " + fmt("%.2e", worst) + (monotone ? ", monotone" : ", NOT monotone") +
              (zero ? ", F(q,0)=0" : ", F(q,0)!=0"));
}

void criterion_budget(const Matrix& m) {
  double worst = 0.0;
  int chains = 0, bad_sums = 0;
  for (const auto& [c, s] : m.solved) {
    if (s.cycle_slots != 30 && s.cycle_slots != 20) continue;
    const auto t = example(c, s.cycle_slots);
    for (GroupLabel g : {GroupLabel::X, GroupLabel::Y, GroupLabel::Z}) {
      const auto chain = chain_for(s.model, t, g, s.cycle_slots);
      for (int b = 1; b <= s.cycle_slots; ++b) {
        const auto r = solve_group_relaxed(chain, b);
        double used = 0.0;
        for (const auto& o : chain.origins) {
          for (LinkId l : o.route) used += o.rate * r.slots.at({o.node, l});
        }
        worst = std::max(worst, std::abs(used - b));
        const auto ia = round_allocation(chain, r, b);
        int sum = 0;
        for (const auto& [k, v] : ia.units) sum += v;
        bad_sums += sum != b ? 1 : 0;
        ++chains;
      }
    }
  }
  verdict(8, "Budget exactness", worst <= 1e-9 && bad_sums == 0,
          std::to_string(chains) + " chain solves, max residual " + fmt("%.2e", worst) + ", " + std::to_string(bad_sums) +
              " integer sums off budget");
}

// Exhaustive optimum over all compositions (zeros allowed) of the budget.
double brute_force(const std::vector<double>& q, int budget) {
  const int n = static_cast<int>(q.size());
  std::vector<std::vector<double>> lg(n, std::vector<double>(budget + 1));
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s <= budget; ++s) lg[i][s] = s == 0 ? -INFINITY : std::log1p(-std::pow(q[i], s));
  }
  double best = -INFINITY;
  std::function<void(int, int, double)> rec = [&](int i, int left, double acc) {
    if (i == n - 1) {
      best = std::max(best, acc + lg[i][left]);
      return;
    }
    for (int s = 0; s <= left; ++s) rec(i + 1, left - s, acc + lg[i][s]);
  };
  rec(0, budget, 0.0);
  return std::exp(best);
}

void criterion_oracle() {
  const double grid[9] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  int cases = 0, bad = 0;
  double worst = 0.0;
  // Origin sets are route lengths drawn from {1,2,3}; routes are suffixes
  // of links (l1, l2, l3) toward the gateway.
  for (int mask = 1; mask < 8; ++mask) {
    std::vector<int> lengths;
    for (int len = 3; len >= 1; --len) {
      if (mask & (1 << (len - 1))) lengths.push_back(len);
    }
    const int links = lengths.front();
    int combos = 1;
    for (int i = 0; i < links; ++i) combos *= 9;
    for (int combo = 0; combo < combos; ++combo) {
      GroupChain chain;
      std::vector<double> link_q(links);
      for (int i = 0, c = combo; i < links; ++i, c /= 9) {
        link_q[i] = grid[c % 9];
        chain.loss[i + 1] = link_q[i];
      }
      std::vector<double> unit_q;
      for (std::size_t o = 0; o < lengths.size(); ++o) {
        ChainOrigin origin{static_cast<NodeId>(o + 1), 1, {}};
        for (int l = links - lengths[o] + 1; l <= links; ++l) {
          origin.route.push_back(l);
          unit_q.push_back(link_q[l - 1]);
        }
        chain.origins.push_back(origin);
      }
      for (int b = 1; b <= 12; ++b) {
        const double want = brute_force(unit_q, b);
        const double got = round_allocation(chain, b).product;
        const double d = std::abs(got - want);
        worst = std::max(worst, d);
        if (d > 1e-12 * std::max(1.0, want)) ++bad;
        ++cases;
      }
    }
  }
  GroupChain hand;
  hand.loss = {{1, 0.5}, {2, 0.5}};
  hand.origins = {{1, 1, {1, 2}}, {2, 1, {2}}};
  const double h = round_allocation(hand, 5).product;
  const bool hand_ok = std::abs(h - 0.28125) < 1e-15;
  verdict(9, "Oracle equivalence of round_allocation", bad == 0 && hand_ok,
          std::to_string(cases) + " chains, " + std::to_string(bad) + " mismatches, max |diff| " + fmt("%.1e", worst) +
              ", hand case " + fmt("%.5f", h));
}

void criterion_tub_com(const Matrix& m) {
  int bad = 0;
  std::string first;
  for (const auto& [c, s] : m.solved) {
    if (s.tub < s.com * (1.0 - 1e-12)) {
      if (!bad) first = " first: case" + std::to_string(c) + " " + s.model.id() + " p" + std::to_string(s.pattern.id);
      ++bad;
    }
  }
  verdict(10, "TUB >= COM", bad == 0, std::to_string(m.solved.size()) + " solved instances, " + std::to_string(bad) + " violations" + first);
}

void criterion_timeline(const Matrix& m) {
  int bad = 0;
  std::string first;
  for (const auto& [c, s] : m.solved) {
    const auto t = example(c, s.cycle_slots);
    const auto conflicts = derive_conflicts(t);
    const auto tl = build_timeline(s, conflicts, t);
    const auto rep = verify_timeline(tl, conflicts, s.cycle_slots);
    std::size_t expected = 0;
    for (const auto& [k, v] : s.integer.totals()) expected += static_cast<std::size_t>(v);
    if (!rep.ok || tl.transmission_count() != expected) {
      if (!bad) first = " first: case" + std::to_string(c) + " " + s.model.id() + " p" + std::to_string(s.pattern.id) + " " + rep.message;
      ++bad;
    }
  }
  verdict(11, "Timeline validity", bad == 0, std::to_string(m.solved.size()) + " timelines, " + std::to_string(bad) + " invalid" + first);
}

// Random Y topology: branch lengths 1..3, losses in [0.05, 0.5], proximity
// covering every link plus some two-hop pairs.
Topology random_topology(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(1, 3), cyc(16, 30), rate(1, 4);
  std::uniform_real_distribution<double> loss(0.05, 0.5), coin(0.0, 1.0);
  TopologySpec spec;
  spec.cycle_slots = cyc(rng);
  NodeId next = 1;
  const NodeId central = next++;
  spec.nodes.push_back({central, 1});
  LinkId link = 1;
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (int b = 0; b < 3; ++b) {
    NodeId prev = central;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      const NodeId id = next++;
      spec.nodes.push_back({id, rate(rng) == 4 ? 2 : 1});
      edges.emplace_back(prev, id);
      prev = id;
    }
    const NodeId gw = 100 + b;
    spec.gateways.push_back({gw, std::string(1, static_cast<char>('X' + b))});
    edges.emplace_back(prev, gw);
  }
  for (const auto& [a, b] : edges) {
    spec.links.push_back({link++, a, b, loss(rng)});
    spec.proximity.emplace_back(a, b);
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      // Two links sharing an endpoint: their far ends are two hops apart.
      NodeId x = 0, y = 0;
      if (edges[i].first == edges[j].first) x = edges[i].second, y = edges[j].second;
      else if (edges[i].second == edges[j].first) x = edges[i].first, y = edges[j].second;
      else continue;
      if (coin(rng) < 0.5) spec.proximity.emplace_back(x, y);
    }
  }
  return validate_topology(spec);
}

void criterion_monte_carlo() {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr std::int64_t kTrials = 100000;
  int checked = 0, failed_nodes = 0, topologies = 0;
  std::string first;
  bool deterministic = true;

  auto run_one = [&](const std::string& tag, const Topology& t, const PatternSolution& s, const std::map<NodeId, double>& analytic,
                     std::uint64_t seed) {
    const auto conflicts = derive_conflicts(t);
    const auto tl = build_timeline(s, conflicts, t);
    if (!verify_timeline(tl, conflicts, s.cycle_slots).ok) {
      ++failed_nodes;
      if (first.empty()) first = " " + tag + ": invalid timeline";
      return;
    }
    const auto rep = simulate(tl, t, kTrials, seed);
    const auto cmp = compare(rep, analytic);
    for (const auto& [id, c] : cmp.nodes) {
      ++checked;
      if (!c.pass) {
        ++failed_nodes;
        if (first.empty()) first = " " + tag + " node " + std::to_string(id) + " z=" + fmt("%.2f", c.z);
      }
    }
  };

  const auto t = example(1);
  const auto sols = solve_model(t, "3-2-3");
  const auto ref = with_integer_totals(sols[0], totals_of(kPattern1Com));
  run_one("reference-com", t, ref, com_probability(totals_of(kPattern1Com), ref.model, t).per_node, 20260001);
  run_one("own-p1", t, sols[0], sols[0].node_com, 20260002);

  for (int i = 0; i < 20; ++i) {
    const auto rt = random_topology(20260101 + static_cast<std::uint64_t>(i));
    const auto ranked = optimize(rt);
    if (ranked.empty()) continue;
    ++topologies;
    run_one("random#" + std::to_string(i), rt, ranked.front(), ranked.front().node_com, 20260201 + static_cast<std::uint64_t>(i));
  }

  {
    const auto conflicts = derive_conflicts(t);
    const auto tl = build_timeline(sols[0], conflicts, t);
    const auto a = simulate(tl, t, 20000, 99, SimOptions{false, 1});
    const auto b = simulate(tl, t, 20000, 99, SimOptions{false, 3});
    const auto c = simulate(tl, t, 20000, 99, SimOptions{false, 1});
    deterministic = a.delivered == b.delivered && a.delivered == c.delivered && a.all_delivered == b.all_delivered;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  verdict(12, "Monte Carlo agreement", failed_nodes == 0 && deterministic && secs < 30.0 && topologies == 20,
          std::to_string(checked) + " node checks at 3 sigma (reference COM row, own 3-2-3 p1, " + std::to_string(topologies) +
              " random topologies), " + std::to_string(failed_nodes) + " outside" + first +
              (deterministic ? ", deterministic" : ", NOT deterministic") + ", " + fmt("%.1f s", secs));
}

}  // namespace

int main() {
  criterion_tables();
  criterion_com();
  criterion_equivalence();
  criterion_ranking();
  const auto matrix = solve_matrix();
  criterion_monotone(matrix);
  criterion_fg();
  criterion_budget(matrix);
  criterion_oracle();
  criterion_tub_com(matrix);
  criterion_timeline(matrix);
  criterion_monte_carlo();
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
