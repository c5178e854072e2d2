#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hsreduce/hash.hpp"
#include "hsreduce/reduction.hpp"

namespace fx {

using namespace hsreduce;

// Both heroes at 30, ten mana for the side to move, nothing else anywhere.
inline GameState blank(int mana = 10) {
  GameState s;
  for (auto& p : s.players) {
    p.hero.mana_crystals = mana;
    p.hero.mana_available = mana;
  }
  return s;
}

inline Minion& put(GameState& s, int side, CardId c, std::int64_t atk = -1, std::int64_t hp = -1) {
  Minion m = make_minion(c);
  if (atk >= 0) m.attack = atk;
  if (hp >= 0) m.health = m.max_health = hp;
  m.instance_id = s.next_instance_id++;
  s.players[side].board.push_back(m);
  return s.players[side].board.back();
}

inline void hand(GameState& s, int side, std::initializer_list<CardId> cards) {
  for (CardId c : cards) s.players[side].hand.push_back(c);
}

inline void deck(GameState& s, int side, std::vector<CardId> cards) { s.players[side].deck = Deck(std::move(cards)); }

inline PlayCard play(int h, std::optional<CharRef> t = {}, std::optional<int> pos = {}) {
  PlayCard pc;
  pc.hand_index = static_cast<std::uint8_t>(h);
  pc.target = t;
  if (pos) pc.position = static_cast<std::uint8_t>(*pos);
  return pc;
}

inline CharRef hero(int side) { return CharRef::hero(side); }
inline CharRef slot(int side, int k) { return CharRef::minion(side, k); }

inline bool has(const std::vector<Action>& as, const Action& a) {
  return std::find(as.begin(), as.end(), a) != as.end();
}

// ---------------------------------------------------------------------------
// Micro corpus: tiny positions whose whole game tree is a handful of plies.

struct Micro {
  std::string name;
  GameState state;
};

inline std::vector<Micro> micro_corpus() {
  std::vector<Micro> out;
  auto add = [&](std::string name, std::function<void(GameState&)> build, int turns = 1) {
    GameState s = blank();
    build(s);
    s.turn_limit = s.turn_number + turns;
    s.outcome = outcome_of(s);
    out.push_back({std::move(name), s});
  };
  using C = CardId;

  add("lethal minion", [](GameState& s) {
    s.players[1].hero.health = 1;
    put(s, 0, C::LeperGnome);
  });
  add("taunt blocks lethal", [](GameState& s) {
    s.players[1].hero.health = 1;
    put(s, 0, C::LeperGnome);
    put(s, 1, C::WeeSpellstopper).taunt = true;
  });
  add("frozen attacker", [](GameState& s) {
    s.players[1].hero.health = 1;
    put(s, 0, C::LeperGnome).frozen = true;
  });
  add("exhausted attacker plus charge", [](GameState& s) {
    s.players[1].hero.health = 3;
    put(s, 0, C::MistressOfMixtures).exhausted = true;
    hand(s, 0, {C::Charge});
  });
  add("weapon to face", [](GameState& s) {
    s.players[1].hero.health = 1;
    hand(s, 0, {C::LightsJustice});
  });
  add("enemy threat next turn", [](GameState& s) {
    s.players[0].hero.health = 1;
    put(s, 1, C::Gahzrilla);
  }, 2);
  add("frost nova saves", [](GameState& s) {
    s.players[0].hero.health = 1;
    put(s, 1, C::Gahzrilla);
    hand(s, 0, {C::FrostNova});
  }, 2);
  add("deathrattle both die", [](GameState& s) {
    s.players[0].hero.health = 2;
    s.players[1].hero.health = 2;
    put(s, 1, C::LeperGnome);
    hand(s, 0, {C::MortalCoil});
  });
  add("leper trade kills own hero", [](GameState& s) {
    s.players[1].hero.health = 2;
    put(s, 0, C::LeperGnome, 2, 1);
    put(s, 1, C::WeeSpellstopper).taunt = true;
    s.players[0].hero.health = 2;
  }, 2);
  add("mind control then nothing", [](GameState& s) {
    s.players[1].hero.health = 5;
    put(s, 1, C::Gahzrilla);
    hand(s, 0, {C::MindControl});
  });
  add("mind control full board", [](GameState& s) {
    for (int i = 0; i < 7; ++i) put(s, 0, C::LeperGnome).exhausted = true;
    put(s, 1, C::Gahzrilla);
    hand(s, 0, {C::MindControl});
    s.players[1].hero.health = 1;
  });
  add("shadow word death choice", [](GameState& s) {
    s.players[0].hero.health = 6;
    put(s, 1, C::Gahzrilla);
    put(s, 1, C::FloatingWatcher);
    hand(s, 0, {C::ShadowWordDeath});
  }, 2);
  add("gahzrilla doubles under backstab", [](GameState& s) {
    s.players[1].hero.health = 12;
    put(s, 0, C::Gahzrilla);
    hand(s, 0, {C::Backstab});
  });
  add("blessed champion lethal", [](GameState& s) {
    s.players[1].hero.health = 8;
    put(s, 0, C::FloatingWatcher);
    hand(s, 0, {C::BlessedChampion});
  });
  add("demonfuse short", [](GameState& s) {
    s.players[1].hero.health = 8;
    put(s, 0, C::FloatingWatcher);
    hand(s, 0, {C::Demonfuse});
  });
  add("spellstopper shields", [](GameState& s) {
    s.players[1].hero.health = 6;
    put(s, 0, C::WeeSpellstopper).exhausted = true;
    put(s, 0, C::FloatingWatcher);
    hand(s, 0, {C::Demonfuse});
  });
  add("auctioneer draws lethal", [](GameState& s) {
    s.players[1].hero.health = 1;
    put(s, 0, C::GadgetzanAuctioneer).exhausted = true;
    hand(s, 0, {C::Innervate});
    deck(s, 0, {C::LightsJustice});
  });
  add("fatigue kills", [](GameState& s) {
    s.players[1].hero.health = 1;
    s.players[1].hero.fatigue_counter = 0;
  }, 2);
  add("flash heal survives", [](GameState& s) {
    s.players[0].hero.health = 3;
    put(s, 1, C::LeperGnome, 4, 1);
    hand(s, 0, {C::FlashHeal});
  }, 2);
  add("mistress heals both", [](GameState& s) {
    s.players[0].hero.health = 1;
    s.players[1].hero.health = 3;
    put(s, 0, C::LeperGnome, 2, 1);
    put(s, 1, C::MistressOfMixtures).taunt = true;
  }, 2);
  add("novice engineer draws weapon", [](GameState& s) {
    s.players[1].hero.health = 1;
    hand(s, 0, {C::NoviceEngineer});
    deck(s, 0, {C::LightsJustice});
  });
  add("arcane intellect mana short", [](GameState& s) {
    s.players[0].hero.mana_available = 4;
    s.players[1].hero.health = 1;
    hand(s, 0, {C::ArcaneIntellect});
    deck(s, 0, {C::Innervate, C::LightsJustice});
  });
  add("two attackers one taunt", [](GameState& s) {
    s.players[1].hero.health = 2;
    put(s, 0, C::LeperGnome);
    put(s, 0, C::MistressOfMixtures);
    put(s, 1, C::LeperGnome, 1, 2).taunt = true;
  });
  add("charge gahzrilla", [](GameState& s) {
    s.players[1].hero.health = 8;
    put(s, 0, C::Gahzrilla).exhausted = true;
    hand(s, 0, {C::Charge});
  });
  add("hero attack into minion", [](GameState& s) {
    s.players[0].hero.health = 2;
    s.players[0].hero.weapon = Weapon{1, 1};
    s.players[1].hero.health = 1;
    put(s, 1, C::LeperGnome, 2, 1).taunt = true;
  });
  add("enemy to move", [](GameState& s) {
    s.active = kEnemy;
    s.players[0].hero.health = 2;
    put(s, 1, C::LeperGnome);
    put(s, 0, C::WeeSpellstopper).taunt = true;
  }, 2);
  return out;
}

// ---------------------------------------------------------------------------
// Plays a buff sequence on a lone carrier through the engine; returns its final attack.

inline std::int64_t simulate_buffs(const BuffSequence& seq) {
  GameState s = blank();
  put(s, kFriendly, seq.carrier == Tribe::Demon ? CardId::FloatingWatcher : CardId::Gahzrilla);
  deck(s, kFriendly, std::vector<CardId>(64, CardId::Innervate));  // Mark's draws
  for (CardId c : seq.cards()) {
    s.players[kFriendly].hand.clear();
    s.players[kFriendly].hand.push_back(c);
    s.players[kFriendly].hero.mana_available = kMaxMana;
    s = apply_action(s, play(0, CharRef::minion(kFriendly, 0)));
  }
  return s.players[kFriendly].board.at(0).attack;
}

// ---------------------------------------------------------------------------
// Partition game by brute force: score all 2^n leaves, then fold the levels bottom-up
// (Left ORs at even positions, Right ANDs at odd ones). No recursion, no pruning.

inline bool naive_left_wins(const PartitionInstance& inst) {
  const std::size_t n = inst.n();
  std::vector<char> level(std::size_t{1} << n);
  for (std::size_t leaf = 0; leaf < level.size(); ++leaf) {
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      bool y = (leaf >> (n - 1 - i)) & 1;
      sum += y ? inst.pairs[i].second : inst.pairs[i].first;
    }
    level[leaf] = sum == inst.target;
  }
  for (std::size_t i = n; i-- > 0;) {
    std::vector<char> up(level.size() / 2);
    for (std::size_t k = 0; k < up.size(); ++k)
      up[k] = i % 2 == 0 ? (level[2 * k] || level[2 * k + 1]) : (level[2 * k] && level[2 * k + 1]);
    level = std::move(up);
  }
  return level[0];
}

inline PartitionInstance random_instance(std::mt19937_64& rng, std::size_t max_n, std::int64_t max_v) {
  PartitionInstance p;
  std::size_t n = 1 + rng() % max_n;
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t x = rng() % (max_v + 1), y = rng() % (max_v + 1);
    p.pairs.emplace_back(x, y);
    sum += (rng() & 1) ? x : y;
  }
  // Half the targets are reachable sums so both verdicts show up.
  p.target = (rng() & 1) ? sum : static_cast<std::int64_t>(rng() % (n * max_v + 1));
  return p;
}

// Every instance with n pairs, values in [0, max_v] and target in [0, max_t].
inline std::vector<PartitionInstance> all_instances(std::size_t n, std::int64_t max_v, std::int64_t max_t) {
  std::vector<PartitionInstance> out;
  const std::int64_t base = max_v + 1;
  std::int64_t combos = 1;
  for (std::size_t i = 0; i < 2 * n; ++i) combos *= base;
  for (std::int64_t c = 0; c < combos; ++c) {
    PartitionInstance p;
    std::int64_t v = c;
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t x = v % base;
      v /= base;
      p.pairs.emplace_back(x, v % base);
      v /= base;
    }
    for (std::int64_t t = 0; t <= max_t; ++t) {
      p.target = t;
      out.push_back(p);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random-walk invariants over compiled configurations.

struct WalkStats {
  std::size_t walks = 0, steps = 0, violations = 0;
  std::string first_violation;
};

inline std::string check_invariants(const GameState& s, std::size_t expected_cards) {
  if (card_instance_count(s) != expected_cards) return "zone conservation";
  for (const auto& p : s.players) {
    if (p.board.size() > kMaxBoard) return "board > 7";
    if (p.hand.size() > kMaxHand) return "hand > 10";
    if (p.hero.mana_available < 0 || p.hero.mana_available > kMaxMana) return "mana out of range";
    for (const auto& m : p.board)
      if (m.health < 1) return "dead minion persists";
  }
  return {};
}

inline WalkStats random_walks(std::size_t walks, std::size_t max_len, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<GameState> starts;
  for (auto inst : {PartitionInstance{{{1, 2}, {4, 3}, {5, 6}, {8, 8}}, 18}, PartitionInstance{{{1, 2}}, 3},
                    PartitionInstance{{{0, 0}}, 0}, PartitionInstance{{{2, 1}, {1, 2}, {0, 2}}, 4}}) {
    auto r = compile(inst);
    starts.push_back(initial_state(r.config));
    // Also start from points along the scripted line, where boards and hands are busy.
    auto line = realize(r.config, r.line, {});
    auto trace = replay(r.config, line.actions, nullptr, true).trace;
    for (std::size_t q = 1; q < 8; ++q) {
      const auto& s = trace[q * trace.size() / 8];
      if (s.outcome == Outcome::Ongoing) starts.push_back(s);
    }
  }
  WalkStats st;
  auto fail = [&](std::string why) {
    if (st.violations++ == 0) st.first_violation = std::move(why);
  };
  for (std::size_t w = 0; w < walks; ++w, ++st.walks) {
    GameState s = starts[w % starts.size()];
    const std::size_t cards = card_instance_count(s);
    std::size_t len = 1 + rng() % max_len;
    for (std::size_t k = 0; k < len && s.outcome == Outcome::Ongoing; ++k, ++st.steps) {
      auto moves = legal_actions(s);
      // Moves that end the game are mostly re-drawn so walks reach deep positions.
      Action a = moves[rng() % moves.size()];
      for (int retry = 0; retry < 4 && apply_action(s, a).outcome != Outcome::Ongoing && rng() % 8 != 0; ++retry)
        a = moves[rng() % moves.size()];
      EventLog l1, l2;
      GameState a1 = apply_action(s, a, &l1);
      GameState a2 = apply_action(s, a, &l2);
      if (!(a1 == a2) || l1.events() != l2.events() || state_hash(a1) != state_hash(a2)) fail("nondeterminism");
      if (auto why = check_invariants(a1, cards); !why.empty()) fail(why);
      s = std::move(a1);
    }
  }
  return st;
}

}  // namespace fx
