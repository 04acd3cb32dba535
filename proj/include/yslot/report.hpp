#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "yslot/slot_allocator.hpp"

namespace yslot {

enum class Format { Csv, Json, Table };

Format parse_format(const std::string& text);

struct RunConfig {
  std::string subcommand;  // enumerate | solve | optimize | simulate | report
  std::filesystem::path topology;
  std::optional<int> cycle_slots;
  bool fixed_z = false;
  std::optional<std::string> model;
  std::optional<NodeId> no_sep_gateway;
  std::optional<int> pattern;
  bool slot_report = false;
  std::optional<std::filesystem::path> emit_timeline;
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
  bool reuse = false;
  int workers = 1;
  Format format = Format::Csv;
  std::optional<std::filesystem::path> output;
  std::vector<std::string> argv;  // recorded in the metadata sidecar
};

/// Runs one subcommand. Returns 0 on success, 1 for infeasible results or
/// failed checks, 2 for usage and configuration errors.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

using Cell = std::variant<std::string, std::int64_t, double, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// CSV and JSON carry full precision; the aligned text form uses 4 decimals.
void write_table(std::ostream& out, const Table& table, Format format);

/// Columns s[i,j] for every pair and s'[i,j] for pairs of non-head origins;
/// rows TUB and COM.
Table slot_table(const PatternSolution& solution, const Topology& topology);

Table summary_table(const std::vector<PatternSolution>& solutions, const std::string& topology_name);

/// Resolves a topology path: as given, else under $YSLOT_CONFIG_DIR.
std::filesystem::path resolve_topology(const std::filesystem::path& given);

}  // namespace yslot
