#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hsreduce/engine.hpp"
#include "hsreduce/partition.hpp"

namespace hsreduce {

// A character named relative to the player executing the step, so scripts stay valid
// as minions come and go.
struct SymRef {
  bool own = true;
  bool hero = false;
  bool from_right = true;
  int index = 0;

  static SymRef own_hero() { return {true, true, false, 0}; }
  static SymRef opp_hero() { return {false, true, false, 0}; }
  static SymRef own_right(int i = 0) { return {true, false, true, i}; }
  static SymRef opp_right(int i = 0) { return {false, false, true, i}; }
  static SymRef opp_left(int i = 0) { return {false, false, false, i}; }
  bool operator==(const SymRef&) const = default;
};

enum class Branch : std::uint8_t { Always, X, Y };

inline bool on_branch(Branch b, Choice c) {
  return b == Branch::Always || (b == Branch::X && c == Choice::X) || (b == Branch::Y && c == Choice::Y);
}

inline constexpr int kRightmost = -1;

struct ScriptStep {
  enum class Kind : std::uint8_t { Play, Attack };
  Kind kind = Kind::Play;
  CardId card{};
  std::optional<SymRef> target;
  std::optional<int> position;  // kRightmost or a slot from the left
  SymRef attacker, defender;
  Branch branch = Branch::Always;
  bool decision = false;  // first step that differs between the two choices

  static ScriptStep play(CardId c) { return ScriptStep{Kind::Play, c, {}, {}, {}, {}, Branch::Always, false}; }
  static ScriptStep play_on(CardId c, SymRef t) { return ScriptStep{Kind::Play, c, t, {}, {}, {}, Branch::Always, false}; }
  static ScriptStep summon(CardId c) { return ScriptStep{Kind::Play, c, {}, kRightmost, {}, {}, Branch::Always, false}; }
  static ScriptStep attack(SymRef a, SymRef d) { return ScriptStep{Kind::Attack, {}, {}, {}, a, d, Branch::Always, false}; }
  ScriptStep on(Branch b, bool is_decision = false) const {
    ScriptStep s = *this;
    s.branch = b;
    s.decision = is_decision;
    return s;
  }
  bool operator==(const ScriptStep&) const = default;
};

inline CharRef resolve(const SymRef& r, const GameState& s) {
  int side = r.own ? s.active : 1 - s.active;
  if (r.hero) return CharRef::hero(side);
  int size = static_cast<int>(s.players[side].board.size());
  int slot = r.from_right ? size - 1 - r.index : r.index;
  if (slot < 0 || slot >= size) throw IllegalAction("scripted reference points at an empty slot");
  return CharRef::minion(side, slot);
}

// Concrete action for a scripted step in the given state. Picks the first copy of the
// card in hand. Throws IllegalAction when the step cannot be expressed.
inline Action resolve(const ScriptStep& st, const GameState& s) {
  if (st.kind == ScriptStep::Kind::Attack) return Attack{resolve(st.attacker, s), resolve(st.defender, s)};
  const auto& hand = s.me().hand;
  auto it = std::find(hand.begin(), hand.end(), st.card);
  if (it == hand.end()) throw IllegalAction(std::string(card_name(st.card)) + " not in hand");
  PlayCard pc;
  pc.hand_index = static_cast<std::uint8_t>(it - hand.begin());
  if (st.target) pc.target = resolve(*st.target, s);
  if (st.position) {
    int p = *st.position == kRightmost ? static_cast<int>(s.me().board.size()) : *st.position;
    pc.position = static_cast<std::uint8_t>(p);
  }
  return pc;
}

struct TurnScript {
  int turn = 1;
  int player = kFriendly;
  int choice = 0;  // 1-based index of the encoded pair; 0 for the verification turn
  std::int64_t x = 0, y = 0;
  std::vector<ScriptStep> steps;

  bool has_decision() const { return choice > 0; }
  std::vector<ScriptStep> steps_for(Choice c) const {
    std::vector<ScriptStep> out;
    for (const auto& s : steps)
      if (on_branch(s.branch, c)) out.push_back(s);
    return out;
  }
};

// Every turn ends with EndTurn except the last, whose continuation is left to search.
struct ScriptedLine {
  std::vector<TurnScript> turns;
};

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const SymRef& r) {
  nlohmann::json j{{"side", r.own ? "own" : "opp"}};
  if (r.hero) j["hero"] = true;
  else j[r.from_right ? "fromRight" : "fromLeft"] = r.index;
  return j;
}

inline SymRef symref_from_json(const nlohmann::json& j) {
  SymRef r;
  r.own = j.at("side").get<std::string>() == "own";
  r.hero = j.value("hero", false);
  if (!r.hero) {
    r.from_right = j.contains("fromRight");
    r.index = r.from_right ? j.at("fromRight").get<int>() : j.at("fromLeft").get<int>();
  }
  return r;
}

inline std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::Always: return "always";
    case Branch::X: return "x";
    case Branch::Y: return "y";
  }
  return "?";
}

inline nlohmann::json to_json(const ScriptStep& s) {
  nlohmann::json j;
  if (s.kind == ScriptStep::Kind::Play) {
    j["play"] = std::string(card_name(s.card));
    if (s.target) j["target"] = to_json(*s.target);
    if (s.position) {
      if (*s.position == kRightmost) j["position"] = "rightmost";
      else j["position"] = *s.position;
    }
  } else {
    j["attack"] = {{"attacker", to_json(s.attacker)}, {"defender", to_json(s.defender)}};
  }
  if (s.branch != Branch::Always) j["branch"] = std::string(to_string(s.branch));
  if (s.decision) j["decision"] = true;
  return j;
}

inline ScriptStep step_from_json(const nlohmann::json& j) {
  ScriptStep s;
  if (j.contains("play")) {
    s.kind = ScriptStep::Kind::Play;
    s.card = card_by_name(j.at("play").get<std::string>());
    if (j.contains("target")) s.target = symref_from_json(j["target"]);
    if (j.contains("position")) {
      const auto& p = j["position"];
      s.position = p.is_string() ? kRightmost : p.get<int>();
    }
  } else {
    s.kind = ScriptStep::Kind::Attack;
    s.attacker = symref_from_json(j.at("attack").at("attacker"));
    s.defender = symref_from_json(j.at("attack").at("defender"));
  }
  auto b = j.value("branch", std::string("always"));
  s.branch = b == "x" ? Branch::X : b == "y" ? Branch::Y : Branch::Always;
  s.decision = j.value("decision", false);
  return s;
}

inline nlohmann::json to_json(const ScriptedLine& line) {
  auto turns = nlohmann::json::array();
  auto decisions = nlohmann::json::array();
  for (const auto& t : line.turns) {
    auto steps = nlohmann::json::array();
    for (const auto& s : t.steps) steps.push_back(to_json(s));
    nlohmann::json tj{{"turn", t.turn}, {"player", t.player}, {"steps", steps}};
    if (t.has_decision()) {
      tj["choice"] = t.choice;
      tj["x"] = t.x;
      tj["y"] = t.y;
      decisions.push_back({{"turn", t.turn}, {"choice", "x"}, {"value", t.x}});
      decisions.push_back({{"turn", t.turn}, {"choice", "y"}, {"value", t.y}});
    }
    turns.push_back(tj);
  }
  return {{"formatVersion", 1}, {"turns", turns}, {"decisions", decisions}};
}

inline ScriptedLine line_from_json(const nlohmann::json& j) {
  ScriptedLine line;
  try {
    for (const auto& tj : j.at("turns")) {
      TurnScript t;
      t.turn = tj.at("turn").get<int>();
      t.player = tj.at("player").get<int>();
      t.choice = tj.value("choice", 0);
      t.x = tj.value("x", std::int64_t{0});
      t.y = tj.value("y", std::int64_t{0});
      for (const auto& sj : tj.at("steps")) t.steps.push_back(step_from_json(sj));
      line.turns.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw BadConfig(std::string("malformed scripted line: ") + e.what());
  }
  return line;
}

}  // namespace hsreduce
