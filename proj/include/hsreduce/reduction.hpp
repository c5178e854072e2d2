#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsreduce/engine.hpp"
#include "hsreduce/partition.hpp"
#include "hsreduce/script.hpp"

namespace hsreduce {

inline std::int64_t leper_health(const PartitionInstance& inst) {
  return 10 * inst.target + 2 * static_cast<std::int64_t>(inst.n()) + 8;
}

inline std::int64_t big_attack(const PartitionInstance& inst) {
  return std::max<std::int64_t>({1000, 20 * max_value(inst) + 100, leper_health(inst) + 1});
}

// ---------------------------------------------------------------------------
// Buff synthesis

class NoMinionNeeded : public std::invalid_argument {
 public:
  NoMinionNeeded() : std::invalid_argument("value 0 needs no buffed carrier") {}
};

enum class BuffKind : std::uint8_t { Demonfuse, Mark, Blessed, Backstab, FlashHealThenBackstab };
enum class DoublingMode : std::uint8_t { Blessed, Backstab };

struct BuffSequence {
  Tribe carrier = Tribe::Demon;
  std::vector<BuffKind> steps;

  std::size_t length() const { return steps.size(); }
  std::vector<CardId> cards() const {
    std::vector<CardId> out;
    for (BuffKind k : steps) {
      switch (k) {
        case BuffKind::Demonfuse: out.push_back(CardId::Demonfuse); break;
        case BuffKind::Mark: out.push_back(CardId::MarkOfYShaarj); break;
        case BuffKind::Blessed: out.push_back(CardId::BlessedChampion); break;
        case BuffKind::Backstab: out.push_back(CardId::Backstab); break;
        case BuffKind::FlashHealThenBackstab:
          out.push_back(CardId::FlashHeal);
          out.push_back(CardId::Backstab);
          break;
      }
    }
    return out;
  }
};

namespace detail {
inline int top_bit(std::int64_t v) {
  int b = 0;
  while ((v >> (b + 1)) != 0) ++b;
  return b;
}

// Below the leading 1 of v: double per bit, then +10 (five +2 buffs) when the bit is set.
inline void append_binary_tail(std::vector<BuffKind>& out, std::int64_t v, DoublingMode mode) {
  bool first = true;
  for (int b = top_bit(v) - 1; b >= 0; --b) {
    if (mode == DoublingMode::Blessed) out.push_back(BuffKind::Blessed);
    else out.push_back(first ? BuffKind::Backstab : BuffKind::FlashHealThenBackstab);
    first = false;
    if ((v >> b) & 1) out.insert(out.end(), 5, BuffKind::Mark);
  }
}
}  // namespace detail

// Floating Watcher 4 -> 10 with two Demonfuse, then binary expansion: exactly 10*v.
inline BuffSequence synthesize_demon_buffs(std::int64_t v) {
  if (v <= 0) throw NoMinionNeeded();
  BuffSequence s{Tribe::Demon, {BuffKind::Demonfuse, BuffKind::Demonfuse}};
  detail::append_binary_tail(s.steps, v, DoublingMode::Blessed);
  return s;
}

// Gahz'rilla 6 -> 10 with two Marks, then binary expansion: exactly 10*v.
inline BuffSequence synthesize_beast_buffs(std::int64_t v, DoublingMode mode) {
  if (v <= 0) throw NoMinionNeeded();
  BuffSequence s{Tribe::Beast, {BuffKind::Mark, BuffKind::Mark}};
  detail::append_binary_tail(s.steps, v, mode);
  return s;
}

// ---------------------------------------------------------------------------
// Deck scheduling

class ScheduleInfeasible : public std::runtime_error {
 public:
  ScheduleInfeasible(int turn, int step, const std::string& why)
      : std::runtime_error("schedule infeasible at turn " + std::to_string(turn) + ", step " + std::to_string(step) +
                           ": " + why),
        turn(turn),
        step(step) {}
  int turn;
  int step;
};

// One unit of a turn's payload. `appends` are the deck cards it needs in hand before it
// resolves; `draws` counts every card drawn while it resolves (Auctioneer included).
struct PayloadItem {
  std::vector<CardId> appends;
  int cost = 0;
  int reserve = 0;  // extra mana that must still be available after it resolves
  int draws = 0;
  std::vector<ScriptStep> steps;

  // A spell with one friendly Auctioneer on board draws 1 plus whatever it draws itself.
  static PayloadItem spell(ScriptStep st, int own_draws = 0) {
    return {{st.card}, card(st.card).cost, 0, 1 + own_draws, {st}};
  }
  static PayloadItem minion(CardId c, int battlecry_draws = 0) {
    return {{c}, card(c).cost, 0, battlecry_draws, {ScriptStep::summon(c)}};
  }
  static PayloadItem action(ScriptStep st) { return {{}, 0, 0, 0, {st}}; }
};

struct TurnSchedule {
  std::vector<CardId> deck;
  std::vector<ScriptStep> steps;
};

// Builds one player's deck segment for a turn that starts with 10 mana and one fresh draw.
// Innervates finance mana, Arcane Intellect bridges draw gaps, Light's Justice soaks up
// surplus draws so the hand holds only what the next play needs. The turn consumes its
// segment exactly: nothing drawn is left over for the next turn.
inline TurnSchedule schedule_turn(int turn, const std::vector<PayloadItem>& items) {
  TurnSchedule out;
  int mana = kMaxMana;
  int avail = 1;  // drawn but not yet assigned deck slots
  int step = 0;

  auto top_up = [&](int cost) {
    if (cost > kMaxMana) throw ScheduleInfeasible(turn, step, "cost " + std::to_string(cost) + " exceeds 10 mana");
    while (mana < cost) {
      if (avail < 1) throw ScheduleInfeasible(turn, step, "no card available to gain mana");
      out.deck.push_back(CardId::Innervate);
      out.steps.push_back(ScriptStep::play(CardId::Innervate));
      mana = std::min(kMaxMana, mana + 2);
    }
  };
  auto filler = [&](CardId c, int draws) {
    top_up(card(c).cost);
    if (avail < 1) throw ScheduleInfeasible(turn, step, "draw chain stalled");
    out.deck.push_back(c);
    out.steps.push_back(ScriptStep::play(c));
    mana -= card(c).cost;
    avail += draws - 1;
  };

  for (std::size_t k = 0; k < items.size(); ++k, ++step) {
    const auto& item = items[k];
    const bool last = k + 1 == items.size();
    const int need = static_cast<int>(item.appends.size());
    while (avail < need || (!last && avail - need + item.draws < 1)) filler(CardId::ArcaneIntellect, 3);
    top_up(item.cost + item.reserve);
    out.deck.insert(out.deck.end(), item.appends.begin(), item.appends.end());
    out.steps.insert(out.steps.end(), item.steps.begin(), item.steps.end());
    mana -= item.cost;
    avail += item.draws - need;
    if (!last)
      while (avail > 1) filler(CardId::LightsJustice, 0);
  }
  while (avail > 0) filler(CardId::LightsJustice, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Turn templates

namespace detail {

inline const SymRef kLeper = SymRef::opp_left(0);

inline void add_buffs(std::vector<PayloadItem>& items, const std::vector<CardId>& cards, SymRef carrier, bool beast) {
  for (CardId c : cards) {
    int own = (c == CardId::MarkOfYShaarj && beast) ? 1 : 0;
    items.push_back(PayloadItem::spell(ScriptStep::play_on(c, carrier), own));
  }
}

// Steal the carrier the opponent left standing, charge it, and send it into the Leper Gnome;
// Novice Engineer and a killing Mortal Coil keep the draw chain alive afterwards.
inline void add_steal_and_attack(std::vector<PayloadItem>& items) {
  items.push_back(PayloadItem::spell(ScriptStep::play_on(CardId::MindControl, SymRef::opp_right(0))));
  items.push_back(PayloadItem::spell(ScriptStep::play_on(CardId::Charge, SymRef::own_right(0))));
  items.push_back(PayloadItem::action(ScriptStep::attack(SymRef::own_right(0), kLeper)));
  items.push_back(PayloadItem::minion(CardId::NoviceEngineer, 1));
  items.push_back(PayloadItem::spell(ScriptStep::play_on(CardId::MortalCoil, SymRef::own_right(0)), 1));
}

inline std::vector<PayloadItem> friendly_choice_turn(int turn, std::int64_t x, std::int64_t y) {
  std::vector<PayloadItem> items;
  const SymRef carrier = SymRef::own_right(0);
  if (turn > 1) add_steal_and_attack(items);

  items.push_back(PayloadItem::minion(CardId::FloatingWatcher));
  add_buffs(items, synthesize_demon_buffs(x).cards(), carrier, false);

  PayloadItem open;
  open.appends = {CardId::Charge, CardId::ShadowWordDeath};
  open.cost = 3;
  open.reserve = 3;  // both spells castable at the decision point
  open.draws = 1;
  open.steps = {ScriptStep::play_on(CardId::Charge, carrier).on(Branch::X, true),
                ScriptStep::attack(carrier, kLeper).on(Branch::X),
                ScriptStep::play_on(CardId::ShadowWordDeath, carrier).on(Branch::Y, true)};
  items.push_back(open);

  items.push_back(PayloadItem::minion(CardId::Gahzrilla));
  add_buffs(items, synthesize_beast_buffs(y, DoublingMode::Blessed).cards(), carrier, true);

  PayloadItem close;
  close.cost = 3;
  close.draws = 1;
  close.steps = {ScriptStep::play_on(CardId::ShadowWordDeath, carrier).on(Branch::X),
                 ScriptStep::play_on(CardId::Charge, carrier).on(Branch::Y),
                 ScriptStep::attack(carrier, kLeper).on(Branch::Y)};
  items.push_back(close);

  // Seed for the opponent's turn: a 7-attack Floating Watcher they must finish buffing.
  items.push_back(PayloadItem::minion(CardId::FloatingWatcher));
  items.push_back(PayloadItem::spell(ScriptStep::play_on(CardId::Demonfuse, carrier)));
  items.push_back(PayloadItem::spell(ScriptStep::play(CardId::FrostNova)));
  return items;
}

inline std::vector<PayloadItem> enemy_choice_turn(std::int64_t x, std::int64_t y) {
  std::vector<PayloadItem> items;
  const SymRef seed = SymRef::opp_right(0);
  auto demon = synthesize_demon_buffs(x).cards();
  demon.erase(demon.begin());  // the opponent already cast the first Demonfuse
  add_buffs(items, demon, seed, false);
  for (int i = 0; i < 6; ++i) items.push_back(PayloadItem::spell(ScriptStep::play_on(CardId::MortalCoil, seed)));
  items.push_back(PayloadItem::spell(ScriptStep::play_on(CardId::MindControl, seed)));

  items.push_back(PayloadItem::minion(CardId::Gahzrilla));
  add_buffs(items, synthesize_beast_buffs(y, DoublingMode::Backstab).cards(), SymRef::own_right(0), true);

  PayloadItem pick;
  pick.appends = {CardId::ShadowWordDeath};
  pick.cost = 3;
  pick.draws = 1;
  pick.steps = {ScriptStep::play_on(CardId::ShadowWordDeath, SymRef::own_right(0)).on(Branch::X, true),
                ScriptStep::play_on(CardId::ShadowWordDeath, SymRef::own_right(1)).on(Branch::Y, true)};
  items.push_back(pick);
  items.push_back(PayloadItem::spell(ScriptStep::play(CardId::FrostNova)));
  return items;
}

inline std::vector<PayloadItem> verification_turn() {
  std::vector<PayloadItem> items;
  add_steal_and_attack(items);
  items.push_back(PayloadItem::minion(CardId::Gahzrilla));
  items.push_back(PayloadItem::spell(ScriptStep::play_on(CardId::FlashHeal, SymRef::own_hero())));
  items.push_back(PayloadItem::spell(ScriptStep::play_on(CardId::Charge, SymRef::own_right(0))));
  items.push_back(PayloadItem::action(ScriptStep::attack(SymRef::own_right(0), kLeper)));
  return items;
}

inline Minion board_minion(CardId c, std::uint32_t& next_id) {
  Minion m = make_minion(c);
  m.instance_id = next_id++;
  return m;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Compilation

struct CompileResult {
  PartitionInstance instance;
  PartitionInstance normalized;
  GameConfig config;
  ScriptedLine line;
};

// Board of the initial position; the Leper Gnome's health and the big attack are inputs.
inline GameState initial_battlefield(std::int64_t leper_hp, std::int64_t big) {
  GameState s;
  std::uint32_t id = 1;
  for (auto& p : s.players) {
    p.hero.health = 1;
    p.hero.max_health = 30;
    p.hero.weapon = Weapon{1, 4};
    p.hero.mana_crystals = kMaxMana;
  }
  auto& enemy = s.players[kEnemy].board;
  Minion leper = detail::board_minion(CardId::LeperGnome, id);
  leper.attack = big;
  leper.health = leper.max_health = leper_hp;
  leper.taunt = true;
  enemy.push_back(leper);
  enemy.push_back(detail::board_minion(CardId::WeeSpellstopper, id));
  enemy.push_back(detail::board_minion(CardId::WeeSpellstopper, id));
  enemy.push_back(detail::board_minion(CardId::GadgetzanAuctioneer, id));

  auto& friendly = s.players[kFriendly].board;
  for (CardId c : {CardId::WeeSpellstopper, CardId::WeeSpellstopper, CardId::MistressOfMixtures,
                   CardId::WeeSpellstopper, CardId::WeeSpellstopper, CardId::GadgetzanAuctioneer}) {
    Minion m = detail::board_minion(c, id);
    m.frozen = true;
    friendly.push_back(m);
  }
  friendly.back().attack = big;
  friendly.back().taunt = true;
  s.next_instance_id = id;
  return s;
}

inline std::vector<Choice> expand_choices(const ScriptedLine& line, std::vector<Choice> choices) {
  std::size_t decisions = 0;
  for (const auto& t : line.turns) decisions += t.has_decision() ? 1 : 0;
  if (choices.size() > decisions) throw InvalidInstance("more choices than decision turns");
  while (choices.size() < decisions) choices.push_back(Choice::X);
  return choices;
}

struct Realized {
  std::vector<Action> actions;
  GameState final_state;
};

// Plays the scripted line for a decision vector (padded with x for normalization turns).
// Stops early once the game is decided; the last turn is left open for search.
inline Realized realize(const GameConfig& cfg, const ScriptedLine& line, const std::vector<Choice>& choices_in,
                        EventLog* log = nullptr) {
  auto choices = expand_choices(line, choices_in);
  Realized r{{}, initial_state(cfg, log)};
  std::size_t d = 0;
  for (std::size_t t = 0; t < line.turns.size(); ++t) {
    const auto& turn = line.turns[t];
    Choice c = turn.has_decision() ? choices[d++] : Choice::X;
    for (const auto& st : turn.steps_for(c)) {
      if (r.final_state.outcome != Outcome::Ongoing) return r;
      Action a = resolve(st, r.final_state);
      r.final_state = apply_action(r.final_state, a, log);
      r.actions.push_back(a);
    }
    if (r.final_state.outcome != Outcome::Ongoing) return r;
    if (t + 1 < line.turns.size()) {
      r.final_state = apply_action(r.final_state, EndTurn{}, log);
      r.actions.push_back(EndTurn{});
    }
  }
  return r;
}

namespace detail {
// Replays the all-x and all-y lines against an unkillable Leper Gnome: every step must be
// legal and no card may burn or fatigue.
inline void validate_compiled(const CompileResult& res) {
  GameConfig probe = res.config;
  auto& leper = probe.state.players[kEnemy].board.front();
  leper.health = leper.max_health = std::int64_t{1} << 40;
  for (Choice c : {Choice::X, Choice::Y}) {
    std::vector<Choice> cs(res.normalized.n(), c);
    EventLog log;
    try {
      realize(probe, res.line, cs, &log);
    } catch (const IllegalAction& e) {
      throw std::logic_error(std::string("compiled line does not replay: ") + e.what());
    }
    for (const auto& e : log.events()) {
      auto type = e.at("type").get<std::string>();
      if (type == "burn" || type == "fatigue") throw std::logic_error("compiled line " + type + "s a card");
    }
  }
}
}  // namespace detail

inline CompileResult compile(const PartitionInstance& inst) {
  validate(inst);
  CompileResult res;
  res.instance = inst;
  res.normalized = normalize(inst);
  const auto& norm = res.normalized;
  const int n = static_cast<int>(norm.n());

  GameState s = initial_battlefield(leper_health(norm), big_attack(norm));
  std::vector<CardId> decks[2];
  for (int turn = 1; turn <= n + 1; ++turn) {
    TurnScript ts;
    ts.turn = turn;
    ts.player = (turn % 2 == 1) ? kFriendly : kEnemy;
    std::vector<PayloadItem> items;
    if (turn <= n) {
      ts.choice = turn;
      ts.x = norm.pairs[turn - 1].first;
      ts.y = norm.pairs[turn - 1].second;
      items = ts.player == kFriendly ? detail::friendly_choice_turn(turn, ts.x, ts.y)
                                     : detail::enemy_choice_turn(ts.x, ts.y);
    } else {
      items = detail::verification_turn();
    }
    auto sched = schedule_turn(turn, items);
    decks[ts.player].insert(decks[ts.player].end(), sched.deck.begin(), sched.deck.end());
    ts.steps = std::move(sched.steps);
    res.line.turns.push_back(std::move(ts));
  }
  for (auto& d : decks) d.insert(d.end(), 2, CardId::LightsJustice);
  for (int p = 0; p < 2; ++p) s.players[p].deck = Deck(decks[p]);
  res.config.state = s;
  res.config.started = false;
  detail::validate_compiled(res);
  return res;
}

}  // namespace hsreduce
