#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hsreduce/cards.hpp"
#include "hsreduce/state.hpp"

namespace hsreduce {

class IllegalAction : public std::runtime_error {
 public:
  explicit IllegalAction(const std::string& what, long step = -1)
      : std::runtime_error(step >= 0 ? "illegal action at step " + std::to_string(step) + ": " + what : what),
        step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

class BadConfig : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structured resolution events, one JSON object each, with a monotone "step" index.
class EventLog {
 public:
  void emit(nlohmann::json e) {
    e["step"] = events_.size();
    events_.push_back(std::move(e));
  }
  const std::vector<nlohmann::json>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }

 private:
  std::vector<nlohmann::json> events_;
};

inline nlohmann::json to_json(const CharRef& r) {
  if (r.is_hero()) return {{"hero", r.side}};
  return {{"side", r.side}, {"slot", r.slot}};
}

inline CharRef char_ref_from_json(const nlohmann::json& j) {
  if (j.contains("hero")) {
    int side = j.at("hero").get<int>();
    if (side < 0 || side > 1) throw BadConfig("hero reference out of range");
    return CharRef::hero(side);
  }
  int side = j.at("side").get<int>(), slot = j.at("slot").get<int>();
  if (side < 0 || side > 1 || slot < 0 || slot >= static_cast<int>(kMaxBoard))
    throw BadConfig("character reference out of range");
  return CharRef::minion(side, slot);
}

inline nlohmann::json to_json(const Action& a) {
  return std::visit(
      [](const auto& x) -> nlohmann::json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PlayCard>) {
          nlohmann::json p{{"hand", x.hand_index}};
          if (x.target) p["target"] = to_json(*x.target);
          if (x.position) p["position"] = *x.position;
          return {{"play", p}};
        } else if constexpr (std::is_same_v<T, Attack>) {
          return {{"attack", {{"attacker", to_json(x.attacker)}, {"defender", to_json(x.defender)}}}};
        } else {
          return {{"end", true}};
        }
      },
      a);
}

inline Action action_from_json(const nlohmann::json& j) {
  if (j.contains("play")) {
    const auto& p = j.at("play");
    PlayCard pc;
    pc.hand_index = p.at("hand").get<std::uint8_t>();
    if (p.contains("target")) pc.target = char_ref_from_json(p.at("target"));
    if (p.contains("position")) pc.position = p.at("position").get<std::uint8_t>();
    return pc;
  }
  if (j.contains("attack")) {
    const auto& a = j.at("attack");
    return Attack{char_ref_from_json(a.at("attacker")), char_ref_from_json(a.at("defender"))};
  }
  if (j.contains("end")) return EndTurn{};
  throw BadConfig("unrecognised action: " + j.dump());
}

// ---------------------------------------------------------------------------
// Rules helpers

inline bool spell_targetable(const PlayerState& p, int slot) {
  auto is_stopper = [&](int i) {
    return i >= 0 && i < static_cast<int>(p.board.size()) && p.board[i].card == CardId::WeeSpellstopper;
  };
  return !is_stopper(slot - 1) && !is_stopper(slot + 1);
}

inline std::int64_t hero_attack(const HeroState& h) { return h.weapon ? h.weapon->attack : 0; }

enum class TargetRule : std::uint8_t {
  None,
  AnyMinion,
  UndamagedMinion,
  DemonMinion,
  FriendlyMinion,
  MinionAttack5Plus,
  EnemyMinion,
  AnyCharacter,
};

inline constexpr TargetRule target_rule(CardId c) {
  switch (card(c).effect) {
    case EffectTag::DealTwoToUndamagedMinion: return TargetRule::UndamagedMinion;
    case EffectTag::DealOneDrawIfKill: return TargetRule::AnyMinion;
    case EffectTag::BuffDemonPlus3Plus3: return TargetRule::DemonMinion;
    case EffectTag::BuffPlus2Plus2DrawIfBeast: return TargetRule::AnyMinion;
    case EffectTag::DoubleAttack: return TargetRule::AnyMinion;
    case EffectTag::GiveChargePlus2Attack: return TargetRule::FriendlyMinion;
    case EffectTag::DestroyMinionAtk5Plus: return TargetRule::MinionAttack5Plus;
    case EffectTag::TakeControlEnemyMinion: return TargetRule::EnemyMinion;
    case EffectTag::RestoreFiveHealth: return TargetRule::AnyCharacter;
    default: return TargetRule::None;
  }
}

inline bool valid_spell_target(const GameState& s, CardId c, const CharRef& t) {
  TargetRule rule = target_rule(c);
  if (t.side > 1) return false;
  if (t.is_hero()) return rule == TargetRule::AnyCharacter;
  const auto& owner = s.players[t.side];
  if (t.slot >= static_cast<int>(owner.board.size())) return false;
  if (!spell_targetable(owner, t.slot)) return false;
  const Minion& m = owner.board[t.slot];
  switch (rule) {
    case TargetRule::None: return false;
    case TargetRule::AnyMinion:
    case TargetRule::AnyCharacter: return true;
    case TargetRule::UndamagedMinion: return !m.damaged();
    case TargetRule::DemonMinion: return m.tribe == Tribe::Demon;
    case TargetRule::FriendlyMinion: return t.side == s.active;
    case TargetRule::MinionAttack5Plus: return m.attack >= 5;
    case TargetRule::EnemyMinion: return t.side != s.active && s.me().board.size() < kMaxBoard;
  }
  return false;
}

inline bool can_attack(const GameState& s, const CharRef& a) {
  if (a.side != s.active) return false;
  const auto& me = s.me();
  if (a.is_hero()) {
    const auto& h = me.hero;
    return h.weapon && h.weapon->attack >= 1 && h.weapon->durability >= 1 && !h.attacked_this_turn && !h.frozen;
  }
  if (a.slot >= static_cast<int>(me.board.size())) return false;
  const Minion& m = me.board[a.slot];
  return m.attack >= 1 && !m.frozen && !m.attacked_this_turn && (!m.exhausted || m.has_charge);
}

inline bool has_taunt(const PlayerState& p) {
  return std::any_of(p.board.begin(), p.board.end(), [](const Minion& m) { return m.taunt; });
}

inline bool can_be_attacked(const GameState& s, const CharRef& d) {
  if (d.side == s.active || d.side > 1) return false;
  const auto& opp = s.opp();
  if (d.is_hero()) return !has_taunt(opp);
  if (d.slot >= static_cast<int>(opp.board.size())) return false;
  return !has_taunt(opp) || opp.board[d.slot].taunt;
}

inline bool check_legal(const GameState& s, const Action& a) {
  if (s.outcome != Outcome::Ongoing) return false;
  if (std::holds_alternative<EndTurn>(a)) return true;
  if (const auto* at = std::get_if<Attack>(&a)) return can_attack(s, at->attacker) && can_be_attacked(s, at->defender);
  const auto& pc = std::get<PlayCard>(a);
  const auto& me = s.me();
  if (pc.hand_index >= me.hand.size()) return false;
  CardId c = me.hand[pc.hand_index];
  const auto& spec = card(c);
  if (spec.cost > me.hero.mana_available) return false;
  switch (spec.kind) {
    case CardKind::Minion:
      return !pc.target && pc.position && me.board.size() < kMaxBoard && *pc.position <= me.board.size();
    case CardKind::Weapon: return !pc.target && !pc.position;
    case CardKind::Spell:
      if (pc.position) return false;
      if (target_rule(c) == TargetRule::None) return !pc.target;
      return pc.target && valid_spell_target(s, c, *pc.target);
  }
  return false;
}

// Order: attacks (hero defender first), then card plays in hand order, then EndTurn.
inline std::vector<Action> legal_actions(const GameState& s) {
  std::vector<Action> out;
  if (s.outcome != Outcome::Ongoing) return out;
  const auto& me = s.me();
  const auto& opp = s.opp();
  const int o = 1 - s.active;

  std::vector<CharRef> defenders;
  if (can_be_attacked(s, CharRef::hero(o))) defenders.push_back(CharRef::hero(o));
  for (int i = 0; i < static_cast<int>(opp.board.size()); ++i)
    if (can_be_attacked(s, CharRef::minion(o, i))) defenders.push_back(CharRef::minion(o, i));

  auto add_attacks = [&](CharRef att) {
    if (!can_attack(s, att)) return;
    for (const auto& d : defenders) out.push_back(Attack{att, d});
  };
  for (int i = 0; i < static_cast<int>(me.board.size()); ++i) add_attacks(CharRef::minion(s.active, i));
  add_attacks(CharRef::hero(s.active));

  for (std::size_t h = 0; h < me.hand.size(); ++h) {
    CardId c = me.hand[h];
    const auto& spec = card(c);
    if (spec.cost > me.hero.mana_available) continue;
    PlayCard pc;
    pc.hand_index = static_cast<std::uint8_t>(h);
    switch (spec.kind) {
      case CardKind::Minion:
        if (me.board.size() >= kMaxBoard) break;
        for (std::size_t p = 0; p <= me.board.size(); ++p) {
          pc.position = static_cast<std::uint8_t>(p);
          out.push_back(pc);
        }
        break;
      case CardKind::Weapon: out.push_back(pc); break;
      case CardKind::Spell:
        if (target_rule(c) == TargetRule::None) {
          out.push_back(pc);
          break;
        }
        for (int side = 0; side < 2; ++side) {
          for (int i = -1; i < static_cast<int>(s.players[side].board.size()); ++i) {
            CharRef t = i < 0 ? CharRef::hero(side) : CharRef::minion(side, i);
            if (valid_spell_target(s, c, t)) {
              pc.target = t;
              out.push_back(pc);
            }
          }
        }
        break;
    }
  }
  out.push_back(EndTurn{});
  return out;
}

inline Outcome outcome_of(const GameState& s) {
  bool friendly_dead = s.players[kFriendly].hero.health <= 0;
  bool enemy_dead = s.players[kEnemy].hero.health <= 0;
  if (friendly_dead && enemy_dead) return Outcome::Draw;
  if (friendly_dead) return Outcome::EnemyWins;
  if (enemy_dead) return Outcome::FriendlyWins;
  return Outcome::Ongoing;
}

// ---------------------------------------------------------------------------
// Resolution

namespace detail {

class Resolver {
 public:
  Resolver(GameState& s, EventLog* log) : s_(s), log_(log) {}

  void emit(nlohmann::json e) {
    if (log_) log_->emit(std::move(e));
  }

  nlohmann::json describe(const CharRef& r) const {
    nlohmann::json j = to_json(r);
    if (!r.is_hero()) {
      const Minion& m = s_.players[r.side].board[r.slot];
      j["card"] = std::string(card_name(m.card));
      j["id"] = m.instance_id;
      j["attack"] = m.attack;
      j["health"] = m.health;
    } else {
      j["health"] = s_.players[r.side].hero.health;
    }
    return j;
  }

  void draw(int player) {
    auto& p = s_.players[player];
    if (p.deck.empty()) {
      ++p.hero.fatigue_counter;
      p.hero.health -= p.hero.fatigue_counter;
      if (log_)
        emit({{"type", "fatigue"}, {"player", player}, {"amount", p.hero.fatigue_counter}, {"health", p.hero.health}});
      return;
    }
    CardId c = p.deck.top();
    p.deck.pop();
    if (p.hand.size() >= kMaxHand) {
      ++p.removed;
      if (log_) emit({{"type", "burn"}, {"player", player}, {"card", std::string(card_name(c))}});
      return;
    }
    p.hand.push_back(c);
    if (log_) emit({{"type", "draw"}, {"player", player}, {"card", std::string(card_name(c))}});
  }

  void damage_minion(int side, int slot, std::int64_t amount) {
    if (amount <= 0) return;
    Minion& m = s_.players[side].board[slot];
    m.health -= amount;
    if (log_)
      emit({{"type", "damage"},
            {"target", to_json(CharRef::minion(side, slot))},
            {"card", std::string(card_name(m.card))},
            {"id", m.instance_id},
            {"amount", amount},
            {"health", m.health}});
    if (card(m.card).effect == EffectTag::TriggerDoubleAttackOnDamage) {
      m.attack *= 2;
      if (log_)
        emit({{"type", "trigger"},
              {"card", std::string(card_name(m.card))},
              {"id", m.instance_id},
              {"effect", "double_attack"},
              {"attack", m.attack}});
    }
  }

  void damage_hero(int side, std::int64_t amount) {
    if (amount <= 0) return;
    auto& h = s_.players[side].hero;
    h.health -= amount;
    if (log_)
      emit({{"type", "damage"}, {"target", to_json(CharRef::hero(side))}, {"amount", amount}, {"health", h.health}});
  }

  void heal_hero(int side, std::int64_t amount) {
    auto& h = s_.players[side].hero;
    h.health = std::min(h.max_health, h.health + amount);
    if (log_) emit({{"type", "heal"}, {"target", to_json(CharRef::hero(side))}, {"health", h.health}});
  }

  void heal_minion(int side, int slot, std::int64_t amount) {
    Minion& m = s_.players[side].board[slot];
    m.health = std::min(m.max_health, m.health + amount);
    if (log_)
      emit({{"type", "heal"}, {"target", to_json(CharRef::minion(side, slot))}, {"id", m.instance_id}, {"health", m.health}});
  }

  void buff(int side, int slot, std::int64_t atk, std::int64_t hp) {
    Minion& m = s_.players[side].board[slot];
    m.attack += atk;
    m.health += hp;
    m.max_health += hp;
    if (log_)
      emit({{"type", "buff"},
            {"target", to_json(CharRef::minion(side, slot))},
            {"id", m.instance_id},
            {"attack", m.attack},
            {"health", m.health}});
  }

  // Removes dead minions (active side first, each left to right), then fires their
  // deathrattles in that order. Repeats until the boards are stable.
  void process_deaths() {
    for (;;) {
      std::vector<std::pair<int, Minion>> dead;
      for (int k = 0; k < 2; ++k) {
        int side = k == 0 ? s_.active : 1 - s_.active;
        auto& board = s_.players[side].board;
        for (std::size_t i = 0; i < board.size();) {
          if (board[i].health <= 0 || board[i].doomed) {
            dead.emplace_back(side, board[i]);
            board.erase(board.begin() + static_cast<std::ptrdiff_t>(i));
            ++s_.players[side].removed;
          } else {
            ++i;
          }
        }
      }
      if (dead.empty()) return;
      for (const auto& [side, m] : dead) {
        if (log_)
          emit({{"type", "death"}, {"player", side}, {"card", std::string(card_name(m.card))}, {"id", m.instance_id}});
      }
      for (const auto& [side, m] : dead) {
        switch (card(m.card).effect) {
          case EffectTag::DeathrattleDamageEnemyHero2:
            if (log_) emit({{"type", "deathrattle"}, {"card", std::string(card_name(m.card))}, {"id", m.instance_id}});
            damage_hero(1 - side, 2);
            break;
          case EffectTag::DeathrattleRestore4EachHero:
            if (log_) emit({{"type", "deathrattle"}, {"card", std::string(card_name(m.card))}, {"id", m.instance_id}});
            heal_hero(side, 4);
            heal_hero(1 - side, 4);
            break;
          default: break;
        }
      }
    }
  }

  void check_outcome() {
    Outcome o = outcome_of(s_);
    if (o != Outcome::Ongoing && s_.outcome == Outcome::Ongoing) {
      s_.outcome = o;
      if (log_) emit({{"type", "outcome"}, {"outcome", std::string(to_string(o))}});
    }
  }

  void cast_spell(CardId c, const std::optional<CharRef>& target) {
    const int me = s_.active;
    auto& player = s_.players[me];
    switch (card(c).effect) {
      case EffectTag::GainTwoMana:
        player.hero.mana_available = std::min(kMaxMana, player.hero.mana_available + 2);
        break;
      case EffectTag::DrawTwo:
        draw(me);
        draw(me);
        break;
      case EffectTag::FreezeEnemyMinions:
        for (auto& m : s_.players[1 - me].board) m.frozen = true;
        if (log_) emit({{"type", "freeze"}, {"player", 1 - me}});
        break;
      case EffectTag::DealTwoToUndamagedMinion: damage_minion(target->side, target->slot, 2); break;
      case EffectTag::DealOneDrawIfKill:
        damage_minion(target->side, target->slot, 1);
        if (s_.players[target->side].board[target->slot].health <= 0) draw(me);
        break;
      case EffectTag::BuffDemonPlus3Plus3: buff(target->side, target->slot, 3, 3); break;
      case EffectTag::BuffPlus2Plus2DrawIfBeast: {
        buff(target->side, target->slot, 2, 2);
        if (s_.players[target->side].board[target->slot].tribe == Tribe::Beast) draw(me);
        break;
      }
      case EffectTag::DoubleAttack: {
        Minion& m = s_.players[target->side].board[target->slot];
        buff(target->side, target->slot, m.attack, 0);
        break;
      }
      case EffectTag::GiveChargePlus2Attack:
        s_.players[target->side].board[target->slot].has_charge = true;
        buff(target->side, target->slot, 2, 0);
        break;
      case EffectTag::DestroyMinionAtk5Plus: s_.players[target->side].board[target->slot].doomed = true; break;
      case EffectTag::TakeControlEnemyMinion: {
        auto& from = s_.players[target->side].board;
        Minion m = from[target->slot];
        from.erase(from.begin() + target->slot);
        m.exhausted = true;
        m.attacked_this_turn = false;
        player.board.push_back(m);
        if (log_)
          emit({{"type", "control"},
                {"player", me},
                {"card", std::string(card_name(m.card))},
                {"id", m.instance_id},
                {"attack", m.attack},
                {"slot", player.board.size() - 1}});
        break;
      }
      case EffectTag::RestoreFiveHealth:
        if (target->is_hero())
          heal_hero(target->side, 5);
        else
          heal_minion(target->side, target->slot, 5);
        break;
      default: break;
    }
  }

  void play(const PlayCard& pc) {
    const int me = s_.active;
    auto& player = s_.players[me];
    CardId c = player.hand[pc.hand_index];
    const auto& spec = card(c);
    player.hand.erase(player.hand.begin() + pc.hand_index);
    player.hero.mana_available -= spec.cost;
    if (log_) {
      nlohmann::json e{{"type", "play"}, {"player", me}, {"card", std::string(spec.name)}};
      if (pc.target) e["target"] = describe(*pc.target);
      if (pc.position) e["position"] = *pc.position;
      emit(std::move(e));
    }
    switch (spec.kind) {
      case CardKind::Minion: {
        Minion m = make_minion(c);
        m.exhausted = true;
        m.instance_id = s_.next_instance_id++;
        player.board.insert(player.board.begin() + *pc.position, m);
        if (log_)
          emit({{"type", "summon"}, {"player", me}, {"card", std::string(spec.name)}, {"id", m.instance_id},
                {"slot", *pc.position}});
        if (spec.effect == EffectTag::BattlecryDrawOne) draw(me);
        process_deaths();
        break;
      }
      case CardKind::Weapon:
        if (player.hero.weapon) ++player.removed;
        player.hero.weapon = Weapon{spec.attack, spec.health_or_durability};
        if (log_) emit({{"type", "equip"}, {"player", me}, {"card", std::string(spec.name)}});
        break;
      case CardKind::Spell: {
        ++player.removed;
        cast_spell(c, pc.target);
        process_deaths();
        int auctioneers = 0;
        for (const auto& m : player.board)
          if (card(m.card).effect == EffectTag::TriggerDrawOnFriendlySpell) ++auctioneers;
        for (int i = 0; i < auctioneers; ++i) {
          if (log_) emit({{"type", "trigger"}, {"card", "Gadgetzan Auctioneer"}, {"effect", "draw"}, {"player", me}});
          draw(me);
        }
        break;
      }
    }
    check_outcome();
  }

  void attack(const Attack& a) {
    const int me = s_.active;
    auto& player = s_.players[me];
    if (log_) emit({{"type", "attack"}, {"attacker", describe(a.attacker)}, {"defender", describe(a.defender)}});
    std::int64_t atk = a.attacker.is_hero() ? hero_attack(player.hero) : player.board[a.attacker.slot].attack;
    std::int64_t counter =
        a.defender.is_hero() ? 0 : s_.players[a.defender.side].board[a.defender.slot].attack;

    if (a.attacker.is_hero()) {
      player.hero.attacked_this_turn = true;
    } else {
      player.board[a.attacker.slot].attacked_this_turn = true;
    }

    if (a.defender.is_hero())
      damage_hero(a.defender.side, atk);
    else
      damage_minion(a.defender.side, a.defender.slot, atk);

    if (a.attacker.is_hero()) {
      damage_hero(me, counter);
      if (--player.hero.weapon->durability <= 0) {
        player.hero.weapon.reset();
        ++player.removed;
        if (log_) emit({{"type", "weapon_destroyed"}, {"player", me}});
      }
    } else {
      damage_minion(me, a.attacker.slot, counter);
    }
    process_deaths();
    check_outcome();
  }

  void begin_turn() {
    const int me = s_.active;
    auto& p = s_.players[me];
    p.hero.mana_crystals = std::min(kMaxMana, p.hero.mana_crystals + 1);
    p.hero.mana_available = p.hero.mana_crystals;
    p.hero.attacked_this_turn = false;
    for (auto& m : p.board) {
      m.exhausted = false;
      m.attacked_this_turn = false;
    }
    if (log_) emit({{"type", "turn_start"}, {"player", me}, {"turn", s_.turn_number}});
    draw(me);
    check_outcome();
  }

  void end_turn() {
    const int me = s_.active;
    auto& p = s_.players[me];
    // A character frozen before its owner's turn has now missed that turn's attack.
    p.hero.frozen = false;
    for (auto& m : p.board) m.frozen = false;
    if (log_) emit({{"type", "turn_end"}, {"player", me}, {"turn", s_.turn_number}});
    s_.active = 1 - me;
    ++s_.turn_number;
    if (s_.turn_number > s_.turn_limit) {
      s_.outcome = Outcome::Draw;
      if (log_) emit({{"type", "outcome"}, {"outcome", "draw"}, {"reason", "turn_limit"}});
      return;
    }
    begin_turn();
  }

 private:
  GameState& s_;
  EventLog* log_;
};

}  // namespace detail

inline std::string describe_action(const Action& a) { return to_json(a).dump(); }

// Pure: returns the successor and leaves `s` untouched.
inline GameState apply_action(const GameState& s, const Action& a, EventLog* log = nullptr) {
  if (!check_legal(s, a)) throw IllegalAction(describe_action(a));
  GameState next = s;
  detail::Resolver r(next, log);
  if (const auto* pc = std::get_if<PlayCard>(&a))
    r.play(*pc);
  else if (const auto* at = std::get_if<Attack>(&a))
    r.attack(*at);
  else
    r.end_turn();
  return next;
}

// Start-of-turn processing for the active player: crystal, refill, thaw bookkeeping, draw.
inline GameState start_turn(const GameState& s, EventLog* log = nullptr) {
  GameState next = s;
  detail::Resolver(next, log).begin_turn();
  return next;
}

// ---------------------------------------------------------------------------
// Configuration

struct GameConfig {
  GameState state;
  bool started = false;  // false: the active player's turn-start draw has not happened yet
};

inline nlohmann::json minion_to_json(const Minion& m) {
  auto flags = nlohmann::json::array();
  if (m.taunt) flags.push_back("taunt");
  if (m.frozen) flags.push_back("frozen");
  if (m.exhausted) flags.push_back("exhausted");
  if (m.has_charge) flags.push_back("charge");
  if (m.attacked_this_turn) flags.push_back("attacked");
  return {{"card", std::string(card_name(m.card))},
          {"attack", m.attack},
          {"health", m.health},
          {"maxHealth", m.max_health},
          {"flags", flags}};
}

inline nlohmann::json state_to_json(const GameState& s) {
  nlohmann::json players = nlohmann::json::array();
  for (const auto& p : s.players) {
    nlohmann::json hero{{"health", p.hero.health},
                        {"maxHealth", p.hero.max_health},
                        {"manaCrystals", p.hero.mana_crystals},
                        {"mana", p.hero.mana_available},
                        {"fatigue", p.hero.fatigue_counter}};
    if (p.hero.weapon) hero["weapon"] = {{"attack", p.hero.weapon->attack}, {"durability", p.hero.weapon->durability}};
    if (p.hero.frozen) hero["frozen"] = true;
    if (p.hero.attacked_this_turn) hero["attacked"] = true;
    auto deck = nlohmann::json::array();
    for (CardId c : p.deck.remaining()) deck.push_back(std::string(card_name(c)));
    auto hand = nlohmann::json::array();
    for (CardId c : p.hand) hand.push_back(std::string(card_name(c)));
    auto board = nlohmann::json::array();
    for (const auto& m : p.board) board.push_back(minion_to_json(m));
    players.push_back({{"hero", hero}, {"deck", deck}, {"hand", hand}, {"board", board}, {"removed", p.removed}});
  }
  nlohmann::json j{{"formatVersion", 1},
                   {"players", players},
                   {"active", s.active},
                   {"turn", s.turn_number},
                   {"turnLimit", s.turn_limit}};
  if (s.outcome != Outcome::Ongoing) j["outcome"] = std::string(to_string(s.outcome));
  return j;
}

inline nlohmann::json config_to_json(const GameConfig& c) {
  nlohmann::json j = state_to_json(c.state);
  j["started"] = c.started;
  return j;
}

inline GameConfig config_from_json(const nlohmann::json& j) {
  try {
    GameConfig cfg;
    GameState& s = cfg.state;
    const auto& players = j.at("players");
    if (!players.is_array() || players.size() != 2) throw BadConfig("config needs exactly two players");
    for (int i = 0; i < 2; ++i) {
      const auto& pj = players[i];
      auto& p = s.players[i];
      const auto& h = pj.at("hero");
      p.hero.health = h.value("health", 30);
      p.hero.max_health = h.value("maxHealth", 30);
      p.hero.mana_crystals = h.value("manaCrystals", 0);
      p.hero.mana_available = h.value("mana", 0);
      p.hero.fatigue_counter = h.value("fatigue", 0);
      p.hero.frozen = h.value("frozen", false);
      p.hero.attacked_this_turn = h.value("attacked", false);
      if (h.contains("weapon"))
        p.hero.weapon = Weapon{h["weapon"].at("attack").get<std::int64_t>(), h["weapon"].at("durability").get<std::int64_t>()};
      if (p.hero.mana_crystals < 0 || p.hero.mana_crystals > kMaxMana || p.hero.mana_available < 0 ||
          p.hero.mana_available > kMaxMana)
        throw BadConfig("mana out of range");
      std::vector<CardId> deck;
      for (const auto& c : pj.value("deck", nlohmann::json::array())) deck.push_back(card_by_name(c.get<std::string>()));
      p.deck = Deck(std::move(deck));
      for (const auto& c : pj.value("hand", nlohmann::json::array())) {
        if (p.hand.size() >= kMaxHand) throw BadConfig("hand larger than 10");
        p.hand.push_back(card_by_name(c.get<std::string>()));
      }
      for (const auto& mj : pj.value("board", nlohmann::json::array())) {
        if (p.board.size() >= kMaxBoard) throw BadConfig("board larger than 7");
        CardId id = card_by_name(mj.at("card").get<std::string>());
        if (card(id).kind != CardKind::Minion) throw BadConfig("board entry is not a minion");
        Minion m = make_minion(id);
        m.attack = mj.value("attack", m.attack);
        m.max_health = mj.value("maxHealth", mj.value("health", m.max_health));
        m.health = mj.value("health", m.max_health);
        if (m.health < 1 || m.health > m.max_health || m.attack < 0) throw BadConfig("bad minion stats");
        for (const auto& f : mj.value("flags", nlohmann::json::array())) {
          auto flag = f.get<std::string>();
          if (flag == "taunt") m.taunt = true;
          else if (flag == "frozen") m.frozen = true;
          else if (flag == "exhausted") m.exhausted = true;
          else if (flag == "charge") m.has_charge = true;
          else if (flag == "attacked") m.attacked_this_turn = true;
          else throw BadConfig("unknown minion flag: " + flag);
        }
        m.instance_id = s.next_instance_id++;
        p.board.push_back(m);
      }
      p.removed = pj.value("removed", 0u);
    }
    s.active = j.value("active", 0);
    if (s.active != 0 && s.active != 1) throw BadConfig("active must be 0 or 1");
    s.turn_number = j.value("turn", 1);
    s.turn_limit = j.value("turnLimit", kDefaultTurnLimit);
    cfg.started = j.value("started", false);
    s.outcome = outcome_of(s);
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw BadConfig(std::string("malformed config: ") + e.what());
  }
}

inline GameState initial_state(const GameConfig& cfg, EventLog* log = nullptr) {
  if (cfg.started || cfg.state.outcome != Outcome::Ongoing) return cfg.state;
  return start_turn(cfg.state, log);
}

struct ReplayResult {
  GameState final_state;
  std::vector<GameState> trace;  // state after each action, when requested
};

inline ReplayResult replay(const GameConfig& cfg, std::span<const Action> script, EventLog* log = nullptr,
                           bool keep_trace = false) {
  ReplayResult r{initial_state(cfg, log), {}};
  for (std::size_t i = 0; i < script.size(); ++i) {
    if (!check_legal(r.final_state, script[i]))
      throw IllegalAction(describe_action(script[i]), static_cast<long>(i));
    r.final_state = apply_action(r.final_state, script[i], log);
    if (keep_trace) r.trace.push_back(r.final_state);
  }
  return r;
}

// Total card instances across both players; constant under every legal action.
inline std::size_t card_instance_count(const GameState& s) {
  std::size_t n = 0;
  for (const auto& p : s.players) n += p.deck.size() + p.hand.size() + p.board.size() + (p.hero.weapon ? 1 : 0) + p.removed;
  return n;
}

}  // namespace hsreduce
