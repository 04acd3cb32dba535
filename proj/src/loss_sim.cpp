#include "yslot/loss_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

namespace yslot {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct Entry {
  int tx = 0;  // dense node index
  int rx = 0;
  bool rx_gateway = false;
  int packet = 0;  // dense packet index
  double loss = 0.0;
  std::vector<std::pair<int, int>>* stream = nullptr;  // (slot, packet) of the same tx and link
};

struct Counts {
  std::vector<std::int64_t> node;
  std::int64_t all = 0;
};

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t trial, std::uint64_t slot, std::uint64_t index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ trial);
  h = splitmix64(h ^ (slot << 32 | (index & 0xFFFFFFFFULL)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

SimReport simulate(const Timeline& timeline, const Topology& topology, std::int64_t trials, std::uint64_t seed,
                   const SimOptions& options) {
  if (trials < 1) throw Error(ErrorKind::InvalidTimeline, "trials must be >= 1");
  SimReport report;
  report.trials = trials;
  report.seed = seed;
  report.reuse = options.reuse;

  std::map<NodeId, int> node_index;
  for (const auto& n : topology.nodes()) node_index.emplace(n.id, static_cast<int>(node_index.size()));
  const int node_count = static_cast<int>(node_index.size());
  std::map<std::pair<NodeId, int>, int> packet_index;
  std::vector<int> packet_owner;
  for (const auto& n : topology.nodes()) {
    for (int k = 0; k < n.rate; ++k) {
      packet_index[{n.id, k}] = static_cast<int>(packet_owner.size());
      packet_owner.push_back(node_index.at(n.id));
    }
  }
  const int packet_count = static_cast<int>(packet_owner.size());

  std::map<std::pair<NodeId, LinkId>, std::vector<std::pair<int, int>>> streams;
  std::vector<std::vector<Entry>> slots(timeline.slots.size());
  for (std::size_t s = 0; s < timeline.slots.size(); ++s) {
    for (const auto& x : timeline.slots[s]) {
      auto pit = packet_index.find({x.origin, x.packet});
      if (pit == packet_index.end() || !node_index.count(x.tx.tx)) {
        throw Error(ErrorKind::InvalidTimeline, "timeline references a packet or node outside the topology");
      }
      const bool gw = topology.is_gateway(x.tx.rx);
      if (!gw && !node_index.count(x.tx.rx)) throw Error(ErrorKind::InvalidTimeline, "unknown receiver");
      Entry e;
      e.tx = node_index.at(x.tx.tx);
      e.rx = gw ? -1 : node_index.at(x.tx.rx);
      e.rx_gateway = gw;
      e.packet = pit->second;
      e.loss = topology.loss(x.tx.link);
      auto& stream = streams[{x.tx.tx, x.tx.link}];
      stream.emplace_back(static_cast<int>(s), e.packet);
      e.stream = &stream;
      slots[s].push_back(e);
    }
  }

  auto run = [&](std::int64_t begin, std::int64_t end, Counts& counts) {
    counts.node.assign(node_count, 0);
    std::vector<char> held(static_cast<std::size_t>(node_count * packet_count));
    std::vector<char> arrived(static_cast<std::size_t>(packet_count));
    for (std::int64_t trial = begin; trial < end; ++trial) {
      std::fill(held.begin(), held.end(), 0);
      std::fill(arrived.begin(), arrived.end(), 0);
      for (int p = 0; p < packet_count; ++p) held[static_cast<std::size_t>(packet_owner[p] * packet_count + p)] = 1;
      for (std::size_t s = 0; s < slots.size(); ++s) {
        for (std::size_t i = 0; i < slots[s].size(); ++i) {
          const Entry& e = slots[s][i];
          const char* mine = &held[static_cast<std::size_t>(e.tx * packet_count)];
          int send = mine[e.packet] ? e.packet : -1;
          if (send < 0 && options.reuse) {
            // Earliest upcoming slot of this stream whose packet is on hand.
            for (const auto& [slot, p] : *e.stream) {
              if (slot > static_cast<int>(s) && mine[p]) {
                send = p;
                break;
              }
            }
          }
          if (send < 0) continue;
          if (counter_uniform(seed, static_cast<std::uint64_t>(trial), s, i) < e.loss) continue;
          if (e.rx_gateway) {
            arrived[static_cast<std::size_t>(send)] = 1;
          } else {
            held[static_cast<std::size_t>(e.rx * packet_count + send)] = 1;
          }
        }
      }
      std::vector<char> node_ok(static_cast<std::size_t>(node_count), 1);
      for (int p = 0; p < packet_count; ++p) {
        if (!arrived[static_cast<std::size_t>(p)]) node_ok[static_cast<std::size_t>(packet_owner[p])] = 0;
      }
      bool all = true;
      for (int n = 0; n < node_count; ++n) {
        counts.node[n] += node_ok[static_cast<std::size_t>(n)];
        all = all && node_ok[static_cast<std::size_t>(n)];
      }
      counts.all += all ? 1 : 0;
    }
  };

  const int workers = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(options.workers, trials)));
  std::vector<Counts> parts(static_cast<std::size_t>(workers));
  if (workers == 1) {
    run(0, trials, parts[0]);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      const std::int64_t b = trials * w / workers, e = trials * (w + 1) / workers;
      pool.emplace_back(run, b, e, std::ref(parts[static_cast<std::size_t>(w)]));
    }
    for (auto& t : pool) t.join();
  }

  for (const auto& [id, idx] : node_index) {
    std::int64_t c = 0;
    for (const auto& p : parts) c += p.node[static_cast<std::size_t>(idx)];
    report.delivered[id] = c;
    report.rate[id] = static_cast<double>(c) / static_cast<double>(trials);
  }
  for (const auto& p : parts) report.all_delivered += p.all;
  report.all_rate = static_cast<double>(report.all_delivered) / static_cast<double>(trials);
  return report;
}

namespace {

NodeCheck check(double empirical, double analytic, std::int64_t trials, double sigmas) {
  NodeCheck c;
  c.empirical = empirical;
  c.analytic = analytic;
  c.sigma = std::sqrt(std::max(0.0, analytic * (1.0 - analytic)) / static_cast<double>(trials));
  const double diff = empirical - analytic;
  if (c.sigma > 0.0) {
    c.z = diff / c.sigma;
    c.pass = std::abs(c.z) <= sigmas;
  } else {
    // Degenerate analytic value: only an exact match is consistent.
    c.z = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    c.pass = std::abs(diff) <= 1.0 / static_cast<double>(trials) * 0.5;
  }
  return c;
}

}  // namespace

Comparison compare(const SimReport& report, const std::map<NodeId, double>& analytic, double sigmas) {
  if (report.rate.size() != analytic.size()) throw Error(ErrorKind::NodeSetMismatch, "node sets differ in size");
  Comparison out;
  double product = 1.0;
  for (const auto& [id, m] : analytic) {
    auto it = report.rate.find(id);
    if (it == report.rate.end()) throw Error(ErrorKind::NodeSetMismatch, "node " + std::to_string(id) + " missing from report");
    out.nodes[id] = check(it->second, m, report.trials, sigmas);
    out.ok = out.ok && out.nodes[id].pass;
    product *= m;
  }
  out.all = check(report.all_rate, product, report.trials, sigmas);
  return out;
}

}  // namespace yslot
