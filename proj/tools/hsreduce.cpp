#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hsreduce/cli.hpp"

namespace cli = hsreduce::cli;

namespace {

void search_flags(CLI::App* sub, cli::Options& o) {
  sub->add_option("--max-nodes", o.max_nodes, "node budget per search")->capture_default_str();
  sub->add_option("--max-depth", o.max_depth, "ply budget per search")->capture_default_str();
  sub->add_option("--turn-limit", o.turn_limit, "turn after which the game is a draw");
  sub->add_flag("--no-table", o.no_table, "disable transposition-table lookups (audit runs)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hearthstone reduction toolkit: compile partition games, replay and solve them"};
  app.set_version_flag("--version", std::string(cli::kToolVersion));
  app.require_subcommand(1);

  cli::Options o;
  std::string first, second, manifest_path;
  app.add_option("--manifest", manifest_path, "write the run manifest here instead of stderr");

  auto* cards = app.add_subcommand("cards", "card database");
  cards->add_subcommand("dump", "print the card table as JSON")->required();
  cards->require_subcommand(1);

  auto* comp = app.add_subcommand("compile", "instance.json -> config.json, line.json, manifest.json");
  comp->add_option("instance", first, "partition instance JSON")->required();
  comp->add_option("out_dir", o.out_dir, "output directory")->required();
  comp->add_option("--turn-limit", o.turn_limit, "turn after which the game is a draw");

  auto* sim = app.add_subcommand("simulate", "play the scripted line for a choice vector");
  sim->add_option("instance", first, "partition instance JSON")->required();
  sim->add_option("--choices", o.choices, "decision vector, e.g. xyyx (padded with x)")->required();
  sim->add_option("--out", o.out_file, "write the concrete action script here");
  search_flags(sim, o);

  auto* rep = app.add_subcommand("replay", "replay an action script, one JSON event per line");
  rep->add_option("config", first, "config.json")->required();
  rep->add_option("script", second, "action script JSON")->required();
  rep->add_flag("--trace", o.trace, "emit a state snapshot after every action");
  rep->add_option("--turn-limit", o.turn_limit, "turn after which the game is a draw");

  auto* solve = app.add_subcommand("solve", "decide the game from a config");
  solve->add_option("config", first, "config.json")->required();
  solve->add_option("--mode", o.mode, "skeleton (needs --line) or full")
      ->check(CLI::IsMember({"skeleton", "full"}))
      ->capture_default_str();
  solve->add_option("--line", o.line_path, "line.json from compile");
  search_flags(solve, o);

  auto* ver = app.add_subcommand("verify", "compile, solve, compare with the oracle, probe deviations");
  ver->add_option("instance", first, "partition instance JSON")->required();
  ver->add_option("--config-override", o.config_override, "use this config instead of the compiled one");
  ver->add_option("--probes", o.probes, "deviation steps: named, all or none")
      ->check(CLI::IsMember({"named", "all", "none"}))
      ->capture_default_str();
  ver->add_option("--mode", o.mode, "verification mode")->check(CLI::IsMember({"skeleton"}))->capture_default_str();
  ver->add_flag("--allow-unresolved", o.allow_unresolved, "exit 0 even with unresolved deviations");
  search_flags(ver, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : cli::kInputError;
  }
  for (auto* sub : app.get_subcommands()) o.command = sub->get_name();
  for (const auto* in : {&first, &second})
    if (!in->empty()) o.inputs.push_back(*in);

  std::ofstream manifest_file;
  std::ostream* manifest = &std::cerr;
  if (!manifest_path.empty()) {
    manifest_file.open(manifest_path);
    manifest = &manifest_file;
  }
  return cli::dispatch(o, std::cout, std::cerr, manifest);
}
