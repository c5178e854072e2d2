#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hsreduce/reduction.hpp"
#include "hsreduce/solver.hpp"

namespace hsreduce::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum Exit : int { kOk = 0, kFailed = 1, kInputError = 2, kInfeasible = 3 };

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string command;
  std::vector<std::string> inputs;
  std::string out_dir;
  std::string out_file;
  std::string choices;
  std::string line_path;
  std::string config_override;
  std::string mode = "skeleton";
  std::string probes = "named";
  std::uint64_t max_nodes = 500'000;
  int max_depth = 256;
  std::optional<int> turn_limit;
  bool allow_unresolved = false;
  bool trace = false;
  bool no_table = false;
};

inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Provenance record for one invocation. Everything but the duration is a function of the
// inputs and flags.
struct Manifest {
  const Options* opts = nullptr;
  std::optional<std::uint64_t> config_hash;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  void hash_config(const GameConfig& cfg) { config_hash = fnv1a(config_to_json(cfg).dump()); }

  nlohmann::json to_json() const {
    const Options& o = *opts;
    nlohmann::json flags{{"maxNodes", o.max_nodes},     {"maxDepth", o.max_depth},
                         {"mode", o.mode},              {"probes", o.probes},
                         {"allowUnresolved", o.allow_unresolved}, {"trace", o.trace},
                         {"noTable", o.no_table}};
    if (o.turn_limit) flags["turnLimit"] = *o.turn_limit;
    if (!o.choices.empty()) flags["choices"] = o.choices;
    if (!o.config_override.empty()) flags["configOverride"] = o.config_override;
    nlohmann::json inputs = o.inputs;
    if (!o.line_path.empty()) inputs.push_back(o.line_path);
    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    nlohmann::json j{{"formatVersion", 1}, {"command", o.command}, {"inputs", inputs},
                     {"flags", flags},     {"toolVersion", kToolVersion}, {"durationMs", ms}};
    j["configHash"] = config_hash ? nlohmann::json(hex64(*config_hash)) : nlohmann::json(nullptr);
    return j;
  }
};

// ---------------------------------------------------------------------------
// File helpers

inline nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

inline PartitionInstance read_instance(const std::string& path) { return instance_from_json(read_json(path)); }

inline GameConfig read_config(const std::string& path) { return config_from_json(read_json(path)); }

inline std::vector<Action> read_script(const std::string& path) {
  auto j = read_json(path);
  const auto& arr = j.is_array() ? j : j.at("actions");
  std::vector<Action> out;
  for (const auto& a : arr) out.push_back(action_from_json(a));
  return out;
}

inline nlohmann::json script_json(const std::vector<Action>& actions) {
  auto arr = nlohmann::json::array();
  for (const auto& a : actions) arr.push_back(to_json(a));
  return {{"formatVersion", 1}, {"actions", arr}};
}

inline void apply_turn_limit(const Options& o, GameConfig& cfg) {
  if (o.turn_limit) cfg.state.turn_limit = *o.turn_limit;
}

inline Budgets budgets(const Options& o) { return {o.max_nodes, o.max_depth, !o.no_table}; }

// ---------------------------------------------------------------------------
// Commands. Each writes its primary output to `out` and returns an exit code.

inline int cmd_cards(const Options&, std::ostream& out, Manifest&) {
  out << card_table_json().dump(2) << "\n";
  return kOk;
}

inline int cmd_compile(const Options& o, std::ostream& out, Manifest& m) {
  auto inst = read_instance(o.inputs.at(0));
  auto res = compile(inst);
  apply_turn_limit(o, res.config);
  m.hash_config(res.config);
  std::filesystem::path dir(o.out_dir);
  std::filesystem::create_directories(dir);
  write_json(dir / "config.json", config_to_json(res.config));
  write_json(dir / "line.json", to_json(res.line));
  write_json(dir / "manifest.json", m.to_json());
  out << nlohmann::json{{"formatVersion", 1},
                        {"instance", to_json(inst)},
                        {"normalized", to_json(res.normalized)},
                        {"leperHealth", res.config.state.players[kEnemy].board.front().health},
                        {"turns", res.line.turns.size()},
                        {"deckSizes", {res.config.state.players[0].deck.size(), res.config.state.players[1].deck.size()}}}
             .dump()
      << "\n";
  return kOk;
}

// Concrete action script for a decision vector: the scripted line, then the search's
// principal variation from wherever the line stops.
inline int cmd_simulate(const Options& o, std::ostream& out, Manifest& m) {
  auto inst = read_instance(o.inputs.at(0));
  auto res = compile(inst);
  apply_turn_limit(o, res.config);
  m.hash_config(res.config);
  auto choices = choices_from_string(o.choices);
  if (choices.size() > res.instance.n()) throw InvalidInstance("more choices than pairs");
  auto real = realize(res.config, res.line, choices);
  std::vector<Action> actions = real.actions;
  Verdict tail = Verdict::Unknown;
  if (real.final_state.outcome == Outcome::Ongoing) {
    auto r = minimax(real.final_state, budgets(o));
    tail = r.verdict;
    actions.insert(actions.end(), r.pv.begin(), r.pv.end());
  }
  EventLog log;
  auto fin = replay(res.config, actions, &log).final_state;
  std::vector<std::int64_t> hp{res.config.state.players[kEnemy].board.front().health};
  for (const auto& e : log.events())
    if (e["type"] == "attack" && e["defender"]["card"] == "Leper Gnome")
      hp.push_back(hp.back() - e["attacker"]["attack"].get<std::int64_t>());
  if (!o.out_file.empty()) write_json(o.out_file, script_json(actions));
  nlohmann::json j{{"formatVersion", 1},
                   {"choices", choices_to_string(expand_choices(res.line, choices))},
                   {"scriptedActions", real.actions.size()},
                   {"tailActions", actions.size() - real.actions.size()},
                   {"outcome", std::string(to_string(fin.outcome))},
                   {"leperHealth", hp}};
  if (real.final_state.outcome == Outcome::Ongoing) j["tailVerdict"] = std::string(to_string(tail));
  if (o.out_file.empty()) j["script"] = script_json(actions)["actions"];
  out << j.dump() << "\n";
  return kOk;
}

inline int cmd_replay(const Options& o, std::ostream& out, Manifest& m) {
  auto cfg = read_config(o.inputs.at(0));
  apply_turn_limit(o, cfg);
  m.hash_config(cfg);
  auto script = read_script(o.inputs.at(1));
  EventLog log;
  std::size_t flushed = 0;
  auto flush = [&] {
    for (; flushed < log.size(); ++flushed) out << log.events()[flushed].dump() << "\n";
  };
  GameState s = initial_state(cfg, &log);
  flush();
  for (std::size_t i = 0; i < script.size(); ++i) {
    if (!check_legal(s, script[i])) {
      flush();
      out << nlohmann::json{{"type", "illegal"}, {"action", i}, {"detail", to_json(script[i])}}.dump() << "\n";
      std::cerr << "illegal action at step " << i << ": " << to_json(script[i]).dump() << "\n";
      return kFailed;
    }
    s = apply_action(s, script[i], &log);
    flush();
    if (o.trace) out << nlohmann::json{{"type", "snapshot"}, {"action", i}, {"state", state_to_json(s)}}.dump() << "\n";
  }
  out << nlohmann::json{{"type", "final"}, {"outcome", std::string(to_string(s.outcome))}, {"actions", script.size()}}
             .dump()
      << "\n";
  return kOk;
}

inline int cmd_solve(const Options& o, std::ostream& out, Manifest& m) {
  auto cfg = read_config(o.inputs.at(0));
  apply_turn_limit(o, cfg);
  m.hash_config(cfg);
  nlohmann::json j{{"formatVersion", 1}, {"mode", o.mode}};
  if (o.mode == "full") {
    GameState s = initial_state(cfg);
    auto r = minimax(s, budgets(o));
    auto pv = nlohmann::json::array();
    for (const auto& a : r.pv) pv.push_back(to_json(a));
    j["player"] = s.active;
    j["verdict"] = std::string(to_string(r.verdict));
    j["value"] = {r.value.lo, r.value.hi};
    j["pv"] = pv;
    j["nodes"] = r.nodes;
    j["ttHits"] = r.tt_hits;
  } else if (o.mode == "skeleton") {
    if (o.line_path.empty()) throw InputError("skeleton mode needs --line");
    auto line = line_from_json(read_json(o.line_path));
    auto r = skeleton_solve(cfg, line, budgets(o));
    j["player"] = kFriendly;
    j["verdict"] = std::string(to_string(r.verdict));
    j["value"] = {r.value.lo, r.value.hi};
    j["choices"] = choices_to_string(r.choices);
    j["engineSteps"] = r.engine_steps;
    j["tailNodes"] = r.tail_nodes;
  } else {
    throw InputError("unknown mode " + o.mode);
  }
  out << j.dump() << "\n";
  return kOk;
}

inline int cmd_verify(const Options& o, std::ostream& out, Manifest& m) {
  auto inst = read_instance(o.inputs.at(0));
  auto res = compile(inst);
  if (!o.config_override.empty()) res.config = read_config(o.config_override);
  apply_turn_limit(o, res.config);
  m.hash_config(res.config);

  const bool oracle = oracle_left_wins(inst);
  auto sk = skeleton_solve(res.config, res.line, budgets(o));
  const bool match = sk.verdict != Verdict::Unknown && (sk.verdict == Verdict::Win) == oracle;

  nlohmann::json j{{"formatVersion", 1}, {"instance", to_json(inst)}, {"oracle", oracle},
                   {"skeleton", std::string(to_string(sk.verdict))}, {"match", match}};
  std::size_t unresolved = 0;
  if (o.probes != "none") {
    std::vector<StepRef> only;
    if (o.probes == "named") only = named_probes(res.line, sk.choices);
    else if (o.probes != "all") throw InputError("unknown probe set " + o.probes);
    // With no named steps there is nothing to check; an empty filter would mean "all".
    DeviationReport rep;
    if (o.probes == "all" || !only.empty())
      rep = deviation_check(res.config, res.line, sk.choices, {o.max_nodes, o.max_depth, 8}, only);
    unresolved = rep.unresolved;
    j["deviations"] = {{"refuted", rep.refuted}, {"unresolved", rep.unresolved}, {"scriptedDominates", rep.dominated}};
    auto open = nlohmann::json::array();
    for (const auto& s : rep.steps)
      if (s.status == DeviationStatus::Unresolved)
        open.push_back({{"turn", s.where.turn + 1}, {"step", s.where.step}, {"label", s.where.label}});
    j["deviations"]["unresolvedSteps"] = open;
  }
  j["choices"] = choices_to_string(sk.choices);
  out << j.dump() << "\n";
  if (!match) return kFailed;
  if (unresolved > 0 && !o.allow_unresolved) return kFailed;
  return kOk;
}

// Runs `body`, mapping the library's failure modes onto exit codes.
template <class F>
int guarded(F&& body, std::ostream& err) {
  try {
    return body();
  } catch (const ScheduleInfeasible& e) {
    err << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const IllegalAction& e) {
    err << e.what() << "\n";
    return kFailed;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const InvalidInstance& e) {
    err << "invalid instance: " << e.what() << "\n";
  } catch (const BadConfig& e) {
    err << "bad config: " << e.what() << "\n";
  } catch (const UnknownCard& e) {
    err << "bad config: " << e.what() << "\n";
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const std::filesystem::filesystem_error& e) {
    err << "input error: " << e.what() << "\n";
  }
  return kInputError;
}

// The manifest goes to `manifest_out` (compile also writes it next to its outputs).
inline int dispatch(const Options& o, std::ostream& out, std::ostream& err, std::ostream* manifest_out) {
  Manifest m;
  m.opts = &o;
  int code = guarded(
      [&] {
        if (o.command == "cards") return cmd_cards(o, out, m);
        if (o.command == "compile") return cmd_compile(o, out, m);
        if (o.command == "simulate") return cmd_simulate(o, out, m);
        if (o.command == "replay") return cmd_replay(o, out, m);
        if (o.command == "solve") return cmd_solve(o, out, m);
        if (o.command == "verify") return cmd_verify(o, out, m);
        throw InputError("unknown command " + o.command);
      },
      err);
  if (manifest_out) *manifest_out << m.to_json().dump() << "\n";
  return code;
}

}  // namespace hsreduce::cli
