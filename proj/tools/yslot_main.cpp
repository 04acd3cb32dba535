#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "yslot/report.hpp"

int main(int argc, char** argv) {
  yslot::RunConfig cfg;
  for (int i = 0; i < argc; ++i) cfg.argv.emplace_back(argv[i]);

  CLI::App app{"TDMA slot allocation for Y-shaped sensor backbones"};
  app.require_subcommand(1);

  std::string topology, format = "csv", output, timeline;
  int cycle = 0, pattern = 0, no_sep = 0;
  std::string model;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-t,--topology", topology, "Topology config (JSON); relative paths also searched in $YSLOT_CONFIG_DIR");
    sub->add_option("-T,--cycle-slots", cycle, "Override the cycle length in slots")->check(CLI::PositiveNumber);
    sub->add_flag("--fixed-z", cfg.fixed_z, "Only models whose no-sep branch ends at gateway Z");
    sub->add_option("-f,--format", format, "csv | json | table")->check(CLI::IsMember({"csv", "json", "table"}));
    sub->add_option("-o,--output", output, "Output file (report: output directory)");
    sub->add_option("--no-sep-branch", no_sep, "Gateway id of the branch without a separation link");
  };
  auto selector = [&](CLI::App* sub) {
    sub->add_option("-m,--model", model, "Path model name, e.g. 3-2-3");
    sub->add_option("-p,--pattern", pattern, "Pattern id")->check(CLI::PositiveNumber);
  };

  auto* en = app.add_subcommand("enumerate", "List path models");
  common(en);
  auto* so = app.add_subcommand("solve", "Solve one model");
  common(so);
  selector(so);
  so->add_flag("--report", cfg.slot_report, "Emit the slot table (TUB and COM rows)");
  so->add_option("--emit-timeline", timeline, "Write the slot grid to this file");
  auto* op = app.add_subcommand("optimize", "Rank every model and pattern");
  common(op);
  auto* si = app.add_subcommand("simulate", "Monte Carlo check of a solution");
  common(si);
  selector(si);
  si->add_option("--trials", cfg.trials, "Number of trials")->check(CLI::PositiveNumber);
  si->add_option("--seed", cfg.seed, "RNG seed");
  si->add_flag("--reuse", cfg.reuse, "Reuse slots of lost packets for the next held packet");
  si->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  auto* re = app.add_subcommand("report", "Slot tables and ranked summary");
  common(re);
  selector(re);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg.topology = topology;
  if (cycle > 0) cfg.cycle_slots = cycle;
  if (pattern > 0) cfg.pattern = pattern;
  if (no_sep > 0) cfg.no_sep_gateway = no_sep;
  if (!model.empty()) cfg.model = model;
  if (!output.empty()) cfg.output = output;
  if (!timeline.empty()) cfg.emit_timeline = timeline;
  cfg.format = yslot::parse_format(format);
  return yslot::run(cfg, std::cout, std::cerr);
}
