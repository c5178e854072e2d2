#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "hsreduce/engine.hpp"
#include "hsreduce/hash.hpp"
#include "hsreduce/partition.hpp"
#include "hsreduce/reduction.hpp"
#include "hsreduce/script.hpp"

namespace hsreduce {

// ---------------------------------------------------------------------------
// Partition-game oracle

namespace detail {
inline bool left_wins_from(const PartitionInstance& inst, std::size_t i, std::int64_t sum) {
  if (i == inst.n()) return sum == inst.target;
  bool a = left_wins_from(inst, i + 1, sum + inst.pairs[i].first);
  bool b = left_wins_from(inst, i + 1, sum + inst.pairs[i].second);
  return i % 2 == 0 ? (a || b) : (a && b);
}
}  // namespace detail

// Left picks at odd positions (1st, 3rd, ...) and Right at even ones; Left wins iff the
// picks sum to exactly T.
inline bool oracle_left_wins(const PartitionInstance& inst) {
  validate(inst);
  return detail::left_wins_from(inst, 0, 0);
}

// ---------------------------------------------------------------------------
// Values

enum class Verdict : std::uint8_t { Win, Loss, Draw, Unknown };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Win: return "win";
    case Verdict::Loss: return "loss";
    case Verdict::Draw: return "draw";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

// Game values are -1 (loss) < 0 (draw) < 1 (win) from some player's point of view.
inline int value_for(Outcome o, int player) {
  switch (o) {
    case Outcome::FriendlyWins: return player == kFriendly ? 1 : -1;
    case Outcome::EnemyWins: return player == kEnemy ? 1 : -1;
    default: return 0;
  }
}

// Sound bounds on an exact game value.
struct Interval {
  int lo = -1;
  int hi = 1;
  bool exact() const { return lo == hi; }
  Interval negated() const { return {-hi, -lo}; }
  bool operator==(const Interval&) const = default;
};

inline Verdict verdict_of(Interval v) {
  if (!v.exact()) return Verdict::Unknown;
  return v.lo > 0 ? Verdict::Win : v.lo < 0 ? Verdict::Loss : Verdict::Draw;
}

struct Budgets {
  std::uint64_t max_nodes = 2'000'000;
  int max_depth = 256;
  bool use_tt = true;
};

struct SolveResult {
  Verdict verdict = Verdict::Unknown;
  Interval value;
  std::vector<Action> pv;
  std::uint64_t nodes = 0;
  std::uint64_t tt_hits = 0;
};

// Copies of one card in hand are interchangeable, so only the first copy's plays are kept.
inline std::vector<Action> distinct_actions(const GameState& s) {
  auto all = legal_actions(s);
  const auto& hand = s.me().hand;
  std::vector<Action> out;
  out.reserve(all.size());
  for (const auto& a : all) {
    if (const auto* pc = std::get_if<PlayCard>(&a)) {
      auto first = std::find(hand.begin(), hand.end(), hand[pc->hand_index]) - hand.begin();
      if (first != pc->hand_index) continue;
    }
    out.push_back(a);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Memoized alpha-beta over engine states

class Searcher {
 public:
  explicit Searcher(Budgets b = {}) : b_(b) {}

  // Value for the player to move in `s`, searched inside the window (alpha, beta).
  Interval search(const GameState& s, int alpha = -2, int beta = 2) { return search(s, b_.max_depth, alpha, beta); }

  std::vector<Action> principal_variation(GameState s, std::size_t max_len = 400) const {
    std::vector<Action> pv;
    while (s.outcome == Outcome::Ongoing && pv.size() < max_len) {
      auto it = tt_.find(state_hash(s));
      if (it == tt_.end() || !it->second.best) break;
      const Action& a = *it->second.best;
      if (!check_legal(s, a)) break;
      pv.push_back(a);
      s = apply_action(s, a);
    }
    return pv;
  }

  std::uint64_t nodes() const { return nodes_; }
  std::uint64_t tt_hits() const { return hits_; }

 private:
  struct Entry {
    Interval v;
    int depth = 0;
    std::optional<Action> best;
  };

  Interval search(const GameState& s, int depth, int alpha, int beta) {
    if (s.outcome != Outcome::Ongoing) {
      int v = value_for(s.outcome, s.active);
      return {v, v};
    }
    if (depth <= 0 || nodes_ >= b_.max_nodes) return {-1, 1};
    ++nodes_;

    const std::uint64_t key = state_hash(s);
    std::optional<Action> hint;
    if (auto it = tt_.find(key); it != tt_.end()) {
      hint = it->second.best;
      if (b_.use_tt) {
        const Entry& e = it->second;
        ++hits_;
        if (e.v.exact()) return e.v;
        alpha = std::max(alpha, e.v.lo);
        beta = std::min(beta, e.v.hi);
        if (alpha >= beta || e.depth >= depth) return e.v;
      }
    }

    auto moves = distinct_actions(s);
    if (hint) {
      auto it = std::find(moves.begin(), moves.end(), *hint);
      if (it != moves.end()) std::rotate(moves.begin(), it, it + 1);
    }

    const int cut = std::min(beta, 1);
    int lo = -2, hi = -2;
    bool complete = true;
    std::optional<Action> best;
    for (std::size_t i = 0; i < moves.size(); ++i) {
      GameState child = apply_action(s, moves[i]);
      Interval c;
      if (child.outcome != Outcome::Ongoing) {
        int v = value_for(child.outcome, s.active);
        c = {v, v};
      } else if (child.active == s.active) {
        c = search(child, depth - 1, std::max(alpha, lo), beta);
      } else {
        c = search(child, depth - 1, -beta, -std::max(alpha, lo)).negated();
      }
      if (c.lo > lo || !best) {
        if (c.lo > lo) lo = c.lo;
        best = moves[i];
      }
      hi = std::max(hi, c.hi);
      if (lo >= cut) {
        complete = i + 1 == moves.size();
        break;
      }
    }
    Interval v{lo, complete ? hi : 1};

    Entry& e = tt_[key];
    if (e.depth > 0 && std::max(e.v.lo, v.lo) <= std::min(e.v.hi, v.hi)) {
      v = {std::max(e.v.lo, v.lo), std::min(e.v.hi, v.hi)};
    }
    e.v = v;
    e.depth = std::max(e.depth, depth);
    e.best = best;
    return v;
  }

  Budgets b_;
  std::unordered_map<std::uint64_t, Entry> tt_;
  std::uint64_t nodes_ = 0;
  std::uint64_t hits_ = 0;
};

inline SolveResult minimax(const GameState& s, Budgets b = {}) {
  Searcher searcher(b);
  SolveResult r;
  r.value = searcher.search(s);
  r.verdict = verdict_of(r.value);
  r.pv = searcher.principal_variation(s);
  r.nodes = searcher.nodes();
  r.tt_hits = searcher.tt_hits();
  return r;
}

// Unmemoized, unpruned reference search. Exponential; only for tiny positions.
inline int plain_search(const GameState& s, std::uint64_t* nodes = nullptr) {
  if (s.outcome != Outcome::Ongoing) return value_for(s.outcome, s.active);
  if (nodes) ++*nodes;
  int best = -2;
  for (const auto& a : legal_actions(s)) {
    GameState child = apply_action(s, a);
    int v;
    if (child.outcome != Outcome::Ongoing) v = value_for(child.outcome, s.active);
    else if (child.active == s.active) v = plain_search(child, nodes);
    else v = -plain_search(child, nodes);
    best = std::max(best, v);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Choice-skeleton search

struct SkeletonResult {
  Verdict verdict = Verdict::Unknown;  // for the friendly player
  Interval value;
  std::vector<Choice> choices;  // principal decision vector (normalized length)
  std::uint64_t engine_steps = 0;
  std::uint64_t tail_nodes = 0;
};

namespace detail {

class Skeleton {
 public:
  Skeleton(const ScriptedLine& line, Budgets tail) : line_(line), tail_(tail) {}

  // Friendly-perspective value of playing the line from the start of turn t.
  Interval solve(const GameState& s, std::size_t t) {
    if (s.outcome != Outcome::Ongoing) {
      int v = value_for(s.outcome, kFriendly);
      return {v, v};
    }
    const std::uint64_t key = state_hash(s) ^ detail::splitmix(t);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.v;

    const auto& turn = line_.turns[t];
    const bool maximize = turn.player == kFriendly;
    Interval best;
    Choice best_choice = Choice::X;
    bool first = true;
    for (Choice c : turn.has_decision() ? std::vector<Choice>{Choice::X, Choice::Y} : std::vector<Choice>{Choice::X}) {
      Interval v = play_turn(s, t, c);
      bool better = first || (maximize ? v.lo > best.lo || (v.lo == best.lo && v.hi > best.hi)
                                       : v.hi < best.hi || (v.hi == best.hi && v.lo < best.lo));
      if (first) best = v;
      else if (maximize) best = {std::max(best.lo, v.lo), std::max(best.hi, v.hi)};
      else best = {std::min(best.lo, v.lo), std::min(best.hi, v.hi)};
      if (better) best_choice = c;
      first = false;
    }
    memo_[key] = {best, best_choice};
    return best;
  }

  std::vector<Choice> principal(GameState s) {
    std::vector<Choice> out;
    for (std::size_t t = 0; t < line_.turns.size() && s.outcome == Outcome::Ongoing; ++t) {
      const auto& turn = line_.turns[t];
      auto it = memo_.find(state_hash(s) ^ detail::splitmix(t));
      Choice c = it == memo_.end() ? Choice::X : it->second.choice;
      if (turn.has_decision()) out.push_back(c);
      s = run_steps(s, turn, c);
      if (s.outcome == Outcome::Ongoing && t + 1 < line_.turns.size()) s = apply_action(s, EndTurn{});
    }
    return out;
  }

  std::uint64_t steps = 0;
  std::uint64_t tail_nodes = 0;

 private:
  struct Memo {
    Interval v;
    Choice choice;
  };

  GameState run_steps(GameState s, const TurnScript& turn, Choice c) {
    for (const auto& st : turn.steps) {
      if (!on_branch(st.branch, c)) continue;
      if (s.outcome != Outcome::Ongoing) break;
      s = apply_action(s, resolve(st, s));
      ++steps;
    }
    return s;
  }

  Interval play_turn(const GameState& start, std::size_t t, Choice c) {
    GameState s = run_steps(start, line_.turns[t], c);
    if (s.outcome != Outcome::Ongoing) {
      int v = value_for(s.outcome, kFriendly);
      return {v, v};
    }
    if (t + 1 < line_.turns.size()) {
      s = apply_action(s, EndTurn{});
      ++steps;
      return solve(s, t + 1);
    }
    Searcher tail(tail_);
    Interval v = tail.search(s);
    tail_nodes += tail.nodes();
    return s.active == kFriendly ? v : v.negated();
  }

  const ScriptedLine& line_;
  Budgets tail_;
  std::unordered_map<std::uint64_t, Memo> memo_;
};

}  // namespace detail

// Branches only at the line's decision points (friendly maximizes, enemy minimizes) and
// plays every other scripted step verbatim; the verification turn's continuation is
// settled by bounded minimax.
inline SkeletonResult skeleton_solve(const GameConfig& cfg, const ScriptedLine& line, Budgets tail = {200'000, 64, true}) {
  detail::Skeleton sk(line, tail);
  GameState s0 = initial_state(cfg);
  SkeletonResult r;
  r.value = sk.solve(s0, 0);
  r.verdict = verdict_of(r.value);
  r.choices = sk.principal(s0);
  r.engine_steps = sk.steps;
  r.tail_nodes = sk.tail_nodes;
  return r;
}

// ---------------------------------------------------------------------------
// Deviation check

enum class DeviationStatus : std::uint8_t { Refuted, ScriptedDominates, Unresolved };

inline std::string_view to_string(DeviationStatus s) {
  switch (s) {
    case DeviationStatus::Refuted: return "refuted";
    case DeviationStatus::ScriptedDominates: return "scripted-dominates";
    case DeviationStatus::Unresolved: return "unresolved";
  }
  return "?";
}

// A position in a realized line: turn index and step index within that turn's steps for
// the chosen branch.
struct StepRef {
  std::size_t turn = 0;
  std::size_t step = 0;
  std::string label;
  bool operator==(const StepRef& o) const { return turn == o.turn && step == o.step; }
};

struct AlternativeReport {
  Action action;
  DeviationStatus status = DeviationStatus::Unresolved;
  Interval value;  // deviator's perspective
  std::uint64_t nodes = 0;
};

struct StepReport {
  StepRef where;
  int player = 0;
  Action scripted;
  DeviationStatus status = DeviationStatus::ScriptedDominates;
  std::vector<AlternativeReport> alternatives;
};

struct DeviationReport {
  int scripted_value = 0;  // friendly perspective
  std::vector<StepReport> steps;
  std::size_t refuted = 0, dominated = 0, unresolved = 0;
};

struct ProbeBudget {
  std::uint64_t nodes = 500'000;
  int depth = 256;
  std::size_t transposition_window = 8;
};

namespace detail {

struct LinePoint {
  std::size_t turn, step;
  GameState before;
  const ScriptStep* script;
};

// Every scripted step of the realized line with the state it is played from.
inline std::vector<LinePoint> walk_line(const GameState& s0, const ScriptedLine& line, const std::vector<Choice>& choices) {
  std::vector<LinePoint> out;
  GameState s = s0;
  std::size_t d = 0;
  for (std::size_t t = 0; t < line.turns.size() && s.outcome == Outcome::Ongoing; ++t) {
    const auto& turn = line.turns[t];
    Choice c = turn.has_decision() ? choices[d++] : Choice::X;
    std::size_t k = 0;
    for (const auto& st : turn.steps) {
      if (!on_branch(st.branch, c)) continue;
      if (s.outcome != Outcome::Ongoing) break;
      out.push_back({t, k++, s, &st});
      s = apply_action(s, resolve(st, s));
    }
    if (s.outcome == Outcome::Ongoing && t + 1 < line.turns.size()) s = apply_action(s, EndTurn{});
  }
  return out;
}

inline bool same_move(const GameState& s, const Action& a, const ScriptStep& st) {
  Action b;
  try {
    b = resolve(st, s);
  } catch (const IllegalAction&) {
    return false;
  }
  if (a.index() != b.index()) return false;
  if (const auto* pa = std::get_if<PlayCard>(&a)) {
    const auto& pb = std::get<PlayCard>(b);
    return s.me().hand[pa->hand_index] == s.me().hand[pb.hand_index] && pa->target == pb.target &&
           pa->position == pb.position;
  }
  return a == b;
}

// True when `alt` is one of the next scripted moves of this turn and playing it early
// reaches exactly the state the script reaches after that move.
inline bool transposes(const std::vector<LinePoint>& pts, std::size_t i, const Action& alt, std::size_t window) {
  const GameState& s = pts[i].before;
  for (std::size_t j = i + 1; j < pts.size() && j <= i + window && pts[j].turn == pts[i].turn; ++j) {
    if (!same_move(s, alt, *pts[j].script)) continue;
    try {
      GameState t = apply_action(s, alt);
      for (std::size_t k = i; k < j; ++k) t = apply_action(t, resolve(*pts[k].script, t));
      GameState target = j + 1 < pts.size() && pts[j + 1].turn == pts[j].turn
                             ? pts[j + 1].before
                             : apply_action(pts[j].before, resolve(*pts[j].script, pts[j].before));
      return state_hash(t) == state_hash(target) && t.players == target.players;
    } catch (const IllegalAction&) {
      return false;
    }
  }
  return false;
}

}  // namespace detail

// Standard forcing probes for a realized line: for every friendly decision turn, the first
// Floating Watcher summon, the move right after the opening decision spell, and Frost Nova.
inline std::vector<StepRef> named_probes(const ScriptedLine& line, const std::vector<Choice>& choices_in) {
  auto choices = expand_choices(line, choices_in);
  std::vector<StepRef> out;
  std::size_t d = 0;
  for (std::size_t t = 0; t < line.turns.size(); ++t) {
    const auto& turn = line.turns[t];
    if (!turn.has_decision()) continue;
    Choice c = choices[d++];
    if (turn.player != kFriendly) continue;
    auto steps = turn.steps_for(c);
    bool summoned = false, opened = false;
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const auto& st = steps[k];
      std::string tag = "turn " + std::to_string(turn.turn) + ": ";
      if (!summoned && st.kind == ScriptStep::Kind::Play && st.card == CardId::FloatingWatcher) {
        out.push_back({t, k, tag + "summon Floating Watcher"});
        summoned = true;
      }
      if (!opened && st.decision && k + 1 < steps.size()) {
        out.push_back({t, k + 1, tag + "after decision spell"});
        opened = true;
      }
      if (st.kind == ScriptStep::Kind::Play && st.card == CardId::FrostNova) out.push_back({t, k, tag + "Frost Nova"});
    }
  }
  return out;
}

// At each selected step (all steps when `only` is empty) every legal alternative is either
// shown to transpose into the script, refuted by search (the deviator then does no better
// than min(scripted value, draw)), or reported unresolved.
inline DeviationReport deviation_check(const GameConfig& cfg, const ScriptedLine& line, const std::vector<Choice>& choices_in,
                                       ProbeBudget probe = {}, const std::vector<StepRef>& only = {}) {
  auto choices = expand_choices(line, choices_in);
  GameState s0 = initial_state(cfg);
  DeviationReport report;
  {
    const GameState end = realize(cfg, line, choices).final_state;
    Interval v;
    if (end.outcome != Outcome::Ongoing) {
      v.lo = v.hi = value_for(end.outcome, kFriendly);
    } else {
      Searcher tail({probe.nodes, probe.depth, true});
      v = end.active == kFriendly ? tail.search(end) : tail.search(end).negated();
    }
    report.scripted_value = v.exact() ? v.lo : 0;
  }

  auto pts = detail::walk_line(s0, line, choices);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    StepRef where{pts[i].turn, pts[i].step, {}};
    if (!only.empty()) {
      auto it = std::find(only.begin(), only.end(), where);
      if (it == only.end()) continue;
      where.label = it->label;
    }
    const GameState& s = pts[i].before;
    const int mover = s.active;
    StepReport sr;
    sr.where = where;
    sr.player = mover;
    sr.scripted = resolve(*pts[i].script, s);
    const int scripted_for_mover = mover == kFriendly ? report.scripted_value : -report.scripted_value;
    const int threshold = std::min(scripted_for_mover, 0);

    bool any_refuted = false, any_unresolved = false;
    for (const auto& a : distinct_actions(s)) {
      if (detail::same_move(s, a, *pts[i].script)) continue;
      AlternativeReport ar{a, DeviationStatus::Unresolved, {}, 0};
      if (detail::transposes(pts, i, a, probe.transposition_window)) {
        ar.status = DeviationStatus::ScriptedDominates;
      } else {
        GameState child = apply_action(s, a);
        Searcher searcher({probe.nodes, probe.depth, true});
        if (child.outcome != Outcome::Ongoing) {
          int v = value_for(child.outcome, mover);
          ar.value = {v, v};
        } else if (child.active == mover) {
          ar.value = searcher.search(child, threshold, threshold + 1);
        } else {
          ar.value = searcher.search(child, -threshold - 1, -threshold).negated();
        }
        ar.nodes = searcher.nodes();
        ar.status = ar.value.hi <= threshold ? DeviationStatus::Refuted : DeviationStatus::Unresolved;
      }
      any_refuted |= ar.status == DeviationStatus::Refuted;
      any_unresolved |= ar.status == DeviationStatus::Unresolved;
      sr.alternatives.push_back(ar);
    }
    sr.status = any_unresolved ? DeviationStatus::Unresolved
                : any_refuted  ? DeviationStatus::Refuted
                               : DeviationStatus::ScriptedDominates;
    switch (sr.status) {
      case DeviationStatus::Refuted: ++report.refuted; break;
      case DeviationStatus::ScriptedDominates: ++report.dominated; break;
      case DeviationStatus::Unresolved: ++report.unresolved; break;
    }
    report.steps.push_back(std::move(sr));
  }
  return report;
}

inline nlohmann::json to_json(const DeviationReport& r) {
  auto steps = nlohmann::json::array();
  for (const auto& s : r.steps) {
    auto alts = nlohmann::json::array();
    for (const auto& a : s.alternatives)
      alts.push_back({{"action", to_json(a.action)},
                      {"status", std::string(to_string(a.status))},
                      {"value", {a.value.lo, a.value.hi}},
                      {"nodes", a.nodes}});
    steps.push_back({{"turn", s.where.turn + 1},
                     {"step", s.where.step},
                     {"label", s.where.label},
                     {"player", s.player},
                     {"scripted", to_json(s.scripted)},
                     {"status", std::string(to_string(s.status))},
                     {"alternatives", alts}});
  }
  return {{"formatVersion", 1},
          {"scriptedValue", r.scripted_value},
          {"refuted", r.refuted},
          {"scriptedDominates", r.dominated},
          {"unresolved", r.unresolved},
          {"steps", steps}};
}

}  // namespace hsreduce
