#include "yslot/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "yslot/loss_sim.hpp"
#include "yslot/schedule_timeline.hpp"

namespace yslot {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed4(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string cell_text(const Cell& c, bool table) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) return v;
        if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
        if constexpr (std::is_same_v<T, double>) return table ? fixed4(v) : full_precision(v);
        if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
      },
      c);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, c);
}

std::string ext_for(Format f) {
  switch (f) {
    case Format::Csv: return ".csv";
    case Format::Json: return ".json";
    case Format::Table: return ".txt";
  }
  return ".txt";
}

std::string node_list(const std::vector<NodeId>& nodes) {
  std::string s;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += (i ? " " : "") + std::to_string(nodes[i]);
  return s;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_sidecar(const std::filesystem::path& data_path, const RunConfig& config, const std::filesystem::path& topology) {
  nlohmann::ordered_json meta;
  meta["tool"] = "yslot";
  meta["version"] = kVersion;
  meta["subcommand"] = config.subcommand;
  meta["topology"] = topology.string();
  meta["argv"] = config.argv;
  meta["generated_at"] = utc_now();
  std::ofstream out(data_path.string() + ".meta.json");
  out << meta.dump(2) << '\n';
}

bool is_config_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotATree:
    case ErrorKind::GatewayCountNot3:
    case ErrorKind::NoDegree3Node:
    case ErrorKind::LossOutOfRange:
    case ErrorKind::LinkNotInProximity:
    case ErrorKind::InvalidConfig:
    case ErrorKind::UnknownModel:
      return true;
    default:
      return false;
  }
}

struct Loaded {
  std::filesystem::path path;
  std::string name;
  Topology topology;
  ConflictSet conflicts;
};

Loaded load(const RunConfig& config) {
  const auto path = resolve_topology(config.topology);
  const auto spec = load_topology_spec(path);
  Topology topo = validate_topology(spec);
  if (config.cycle_slots) topo = topo.with_cycle_slots(*config.cycle_slots);
  auto conflicts = derive_conflicts(topo);
  return {path, spec.name.empty() ? path.stem().string() : spec.name, std::move(topo), std::move(conflicts)};
}

std::optional<int> z_filter(const RunConfig& config, const Topology& topo) {
  if (config.no_sep_gateway) {
    for (int b = 0; b < 3; ++b) {
      if (topo.branches()[b].gateway == *config.no_sep_gateway) return b;
    }
    throw Error(ErrorKind::UnknownModel, "no gateway with id " + std::to_string(*config.no_sep_gateway));
  }
  if (config.fixed_z) return default_z_branch(topo);
  return std::nullopt;
}

std::vector<PatternSolution> solve_selected(const RunConfig& config, const Loaded& l) {
  if (!config.model) throw Error(ErrorKind::UnknownModel, "--model is required");
  const auto model = find_model(l.topology, *config.model, config.no_sep_gateway);
  std::vector<PatternSolution> out;
  for (const auto& p : patterns_for(model, l.conflicts)) {
    if (config.pattern && p.id != *config.pattern) continue;
    out.push_back(solve_pattern(model, p, l.topology, l.conflicts));
  }
  if (out.empty()) throw Error(ErrorKind::UnknownModel, "model " + model.name + " has no pattern " + std::to_string(*config.pattern));
  return out;
}

// Writes to --output (plus sidecar) or to `out`.
void emit(const RunConfig& config, const Loaded& l, const Table& t, std::ostream& out,
          const std::optional<std::filesystem::path>& path) {
  if (path) {
    std::ofstream f(*path);
    if (!f) throw Error(ErrorKind::InvalidConfig, "cannot write " + path->string());
    write_table(f, t, config.format);
    write_sidecar(*path, config, l.path);
  } else {
    write_table(out, t, config.format);
  }
}

std::filesystem::path numbered(const std::filesystem::path& p, int pattern, bool many) {
  if (!many) return p;
  auto q = p;
  q.replace_filename(p.stem().string() + "_p" + std::to_string(pattern) + p.extension().string());
  return q;
}

int cmd_enumerate(const RunConfig& config, std::ostream& out) {
  const auto l = load(config);
  Table t;
  t.columns = {"model", "name", "type", "z_gateway", "sep_x", "sep_y", "S_X", "S_Y", "S_Z", "patterns"};
  for (const auto& m : enumerate_path_models(l.topology, z_filter(config, l.topology))) {
    t.rows.push_back({m.id(), m.name, std::int64_t{m.type}, std::int64_t{m.z_gateway()}, std::int64_t{m.sep_x},
                      std::int64_t{m.sep_y}, node_list(m.group(GroupLabel::X).nodes), node_list(m.group(GroupLabel::Y).nodes),
                      node_list(m.group(GroupLabel::Z).nodes), std::int64_t(patterns_for(m, l.conflicts).size())});
  }
  emit(config, l, t, out, config.output);
  return 0;
}

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto l = load(config);
  const auto sols = solve_selected(config, l);
  int status = 0;
  if (config.emit_timeline) {
    for (const auto& s : sols) {
      const auto tl = build_timeline(s, l.conflicts, l.topology);
      const auto rep = verify_timeline(tl, l.conflicts, s.cycle_slots);
      const auto path = numbered(*config.emit_timeline, s.pattern.id, sols.size() > 1);
      std::ofstream f(path);
      if (!f) throw Error(ErrorKind::InvalidConfig, "cannot write " + path.string());
      write_grid(f, tl, l.topology);
      if (!rep.ok) {
        err << "timeline check failed for pattern " << s.pattern.id << ": " << rep.message << '\n';
        status = 1;
      }
    }
  }
  if (config.slot_report) {
    Table t;
    for (const auto& s : sols) {
      auto part = slot_table(s, l.topology);
      if (t.columns.empty()) {
        t.columns = {"pattern"};
        t.columns.insert(t.columns.end(), part.columns.begin(), part.columns.end());
      }
      for (auto& row : part.rows) {
        row.insert(row.begin(), Cell{std::int64_t{s.pattern.id}});
        t.rows.push_back(std::move(row));
      }
    }
    emit(config, l, t, out, config.output);
  } else {
    emit(config, l, summary_table(sols, l.name), out, config.output);
  }
  for (const auto& s : sols) {
    if (!s.feasible) {
      err << "pattern " << s.pattern.id << " of " << s.model.id() << " is infeasible at T=" << s.cycle_slots << '\n';
      status = 1;
    }
  }
  return status;
}

int cmd_optimize(const RunConfig& config, std::ostream& out) {
  const auto l = load(config);
  const auto sols = optimize(l.topology, z_filter(config, l.topology));
  emit(config, l, summary_table(sols, l.name), out, config.output);
  return sols.empty() || !sols.front().feasible ? 1 : 0;
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto l = load(config);
  PatternSolution sol;
  if (config.model) {
    auto sols = solve_selected(config, l);
    sol = std::move(sols.front());
  } else {
    auto sols = optimize(l.topology, z_filter(config, l.topology));
    sol = std::move(sols.front());
  }
  const auto tl = build_timeline(sol, l.conflicts, l.topology);
  const auto rep = verify_timeline(tl, l.conflicts, sol.cycle_slots);
  if (!rep.ok) {
    err << "timeline check failed: " << rep.message << '\n';
    return 1;
  }
  const auto report = simulate(tl, l.topology, config.trials, config.seed, SimOptions{config.reuse, config.workers});
  const auto cmp = compare(report, sol.node_com);

  Table t;
  t.columns = {"model", "pattern", "node", "analytic", "empirical", "delivered", "trials", "sigma", "z", "pass", "seed", "rng", "reuse"};
  bool ok = true;
  auto add = [&](const std::string& node, const NodeCheck& c, std::int64_t delivered, bool counts) {
    // With reuse only a shortfall counts: reuse adds delivery chances.
    const bool pass = config.reuse ? c.z >= -3.0 : c.pass;
    if (counts) ok = ok && pass;
    t.rows.push_back({sol.model.id(), std::int64_t{sol.pattern.id}, node, c.analytic, c.empirical, delivered, report.trials, c.sigma,
                      c.z, pass, std::to_string(report.seed), report.rng, config.reuse});
  };
  for (const auto& [id, c] : cmp.nodes) add(std::to_string(id), c, report.delivered.at(id), true);
  add("all", cmp.all, report.all_delivered, false);
  emit(config, l, t, out, config.output);
  return ok ? 0 : 1;
}

int cmd_report(const RunConfig& config, std::ostream& out) {
  const auto l = load(config);
  const auto ranked = optimize(l.topology, z_filter(config, l.topology));
  std::vector<PatternSolution> chosen;
  if (config.model) {
    chosen = solve_selected(config, l);
  } else if (!ranked.empty()) {
    for (const auto& p : patterns_for(ranked.front().model, l.conflicts)) {
      chosen.push_back(solve_pattern(ranked.front().model, p, l.topology, l.conflicts));
    }
  }
  Table slots;
  for (const auto& s : chosen) {
    auto part = slot_table(s, l.topology);
    if (slots.columns.empty()) {
      slots.columns = {"model", "pattern"};
      slots.columns.insert(slots.columns.end(), part.columns.begin(), part.columns.end());
    }
    for (auto& row : part.rows) {
      row.insert(row.begin(), Cell{std::int64_t{s.pattern.id}});
      row.insert(row.begin(), Cell{s.model.id()});
      slots.rows.push_back(std::move(row));
    }
  }
  const auto summary = summary_table(ranked, l.name);
  if (config.output) {
    std::filesystem::create_directories(*config.output);
    emit(config, l, slots, out, *config.output / ("slots" + ext_for(config.format)));
    emit(config, l, summary, out, *config.output / ("summary" + ext_for(config.format)));
  } else {
    write_table(out, slots, config.format);
    out << '\n';
    write_table(out, summary, config.format);
  }
  return 0;
}

}  // namespace

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  if (text == "table") return Format::Table;
  throw Error(ErrorKind::InvalidConfig, "unknown format " + text);
}

std::filesystem::path resolve_topology(const std::filesystem::path& given) {
  const char* dir = std::getenv("YSLOT_CONFIG_DIR");
  if (given.empty()) {
    if (!dir) throw Error(ErrorKind::InvalidConfig, "no --topology given and YSLOT_CONFIG_DIR is unset");
    return std::filesystem::path(dir) / "example8_case1.json";
  }
  if (std::filesystem::exists(given) || given.is_absolute() || !dir) return given;
  const auto alt = std::filesystem::path(dir) / given;
  return std::filesystem::exists(alt) ? alt : given;
}

void write_table(std::ostream& out, const Table& table, Format format) {
  switch (format) {
    case Format::Csv: {
      for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << csv_escape(table.columns[c]);
      out << '\n';
      for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_escape(cell_text(row[c], false));
        out << '\n';
      }
      break;
    }
    case Format::Json: {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = cell_json(row[c]);
        arr.push_back(std::move(obj));
      }
      out << arr.dump(2) << '\n';
      break;
    }
    case Format::Table: {
      std::vector<std::size_t> width(table.columns.size());
      for (std::size_t c = 0; c < table.columns.size(); ++c) width[c] = table.columns[c].size();
      for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], cell_text(row[c], true).size());
      }
      auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
          out << (c ? "  " : "") << std::setw(static_cast<int>(width[c])) << cells[c];
        }
        out << '\n';
      };
      line(table.columns);
      for (const auto& row : table.rows) {
        std::vector<std::string> cells;
        for (const auto& c : row) cells.push_back(cell_text(c, true));
        line(cells);
      }
      break;
    }
  }
}

Table slot_table(const PatternSolution& solution, const Topology& topology) {
  const auto& model = solution.model;
  std::set<NodeId> head_origins;
  for (GroupLabel g : {GroupLabel::X, GroupLabel::Y, GroupLabel::Z}) {
    for (const auto& p : head_pairs(model, g)) head_origins.insert(p.origin);
  }
  std::map<UnitKey, UnitSlots<double>> relaxed;
  std::map<UnitKey, UnitSlots<int>> integer;
  for (const auto& g : solution.relaxed.groups) relaxed.insert(g.units.begin(), g.units.end());
  for (const auto& g : solution.integer.groups) integer.insert(g.units.begin(), g.units.end());

  Table t;
  t.columns = {"row"};
  std::vector<Cell> tub{std::string("TUB")}, com{std::string("COM")};
  for (const auto& [key, slots] : relaxed) {
    const bool many = topology.rate(key.origin) > 1;
    const std::string idx = std::to_string(key.origin) + "," + std::to_string(key.link) +
                            (many ? "," + std::to_string(key.packet + 1) : std::string());
    t.columns.push_back("s[" + idx + "]");
    tub.push_back(slots.serial);
    com.push_back(std::int64_t{integer.at(key).serial});
    if (!head_origins.count(key.origin)) {
      t.columns.push_back("s'[" + idx + "]");
      tub.push_back(slots.early);
      com.push_back(std::int64_t{integer.at(key).early});
    }
  }
  t.rows.push_back(std::move(tub));
  t.rows.push_back(std::move(com));
  return t;
}

Table summary_table(const std::vector<PatternSolution>& solutions, const std::string& topology_name) {
  Table t;
  t.columns = {"rank", "topology", "model", "name", "type", "pattern", "T", "case", "predicted", "TUB", "COM", "feasible"};
  std::int64_t rank = 0;
  for (const auto& s : solutions) {
    t.rows.push_back({++rank, topology_name, s.model.id(), s.model.name, std::int64_t{s.model.type}, std::int64_t{s.pattern.id},
                      std::int64_t{s.cycle_slots}, s.case_label, s.predicted_orientation, s.tub, s.com, s.feasible});
  }
  return t;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.subcommand == "enumerate") return cmd_enumerate(config, out);
    if (config.subcommand == "solve") return cmd_solve(config, out, err);
    if (config.subcommand == "optimize") return cmd_optimize(config, out);
    if (config.subcommand == "simulate") return cmd_simulate(config, out, err);
    if (config.subcommand == "report") return cmd_report(config, out);
    err << "unknown subcommand: " << config.subcommand << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_config_error(e.kind()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace yslot
