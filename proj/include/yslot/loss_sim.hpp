#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "yslot/schedule_timeline.hpp"

namespace yslot {

struct SimOptions {
  bool reuse = false;  // idle slots carry another held packet of the same stream
  int workers = 1;
};

struct SimReport {
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  std::string rng = "splitmix64-counter";
  bool reuse = false;
  std::map<NodeId, std::int64_t> delivered;  // trials in which all of the node's packets arrived
  std::map<NodeId, double> rate;
  std::int64_t all_delivered = 0;
  double all_rate = 0.0;
};

/// Uniform in [0,1) derived from the counter (seed, trial, slot, index).
double counter_uniform(std::uint64_t seed, std::uint64_t trial, std::uint64_t slot, std::uint64_t index);

SimReport simulate(const Timeline& timeline, const Topology& topology, std::int64_t trials, std::uint64_t seed,
                   const SimOptions& options = {});

struct NodeCheck {
  double empirical = 0.0;
  double analytic = 0.0;
  double sigma = 0.0;
  double z = 0.0;
  bool pass = true;
};

struct Comparison {
  bool ok = true;
  std::map<NodeId, NodeCheck> nodes;
  NodeCheck all;  // all-delivered rate against the product of the analytic values
};

/// Flags nodes whose empirical rate is more than `sigmas` standard errors
/// away from the analytic probability.
Comparison compare(const SimReport& report, const std::map<NodeId, double>& analytic, double sigmas = 3.0);

}  // namespace yslot
