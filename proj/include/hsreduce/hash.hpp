#pragma once

#include <cstdint>

#include "hsreduce/state.hpp"

namespace hsreduce {

// Zobrist-style digest: every component contributes an independent 64-bit key derived from
// (zone, player, position, contents) and the keys are XOR-combined, so the result does not
// depend on the order the zones are visited. Instance ids are not part of the digest; two
// states that differ only in id bookkeeping are the same game position.
//
// Keys come from splitmix64 chains, so two distinct positions collide with probability
// about 2^-64 per pair.
namespace hash_detail {

enum class Zone : std::uint64_t { Global = 1, Hero, Weapon, Hand, Board, Deck };

inline std::uint64_t mix(std::uint64_t h, std::uint64_t v) { return detail::splitmix(h ^ detail::splitmix(v)); }

inline std::uint64_t key(Zone z, int player, std::uint64_t pos) {
  return mix(mix(static_cast<std::uint64_t>(z), static_cast<std::uint64_t>(player)), pos);
}

inline std::uint64_t global_key(const GameState& s) {
  std::uint64_t h = key(Zone::Global, 0, 0);
  h = mix(h, static_cast<std::uint64_t>(s.active));
  h = mix(h, static_cast<std::uint64_t>(s.turn_number));
  h = mix(h, static_cast<std::uint64_t>(s.turn_limit));
  return mix(h, static_cast<std::uint64_t>(s.outcome));
}

inline std::uint64_t hero_key(int player, const PlayerState& p) {
  const auto& h = p.hero;
  std::uint64_t k = key(Zone::Hero, player, 0);
  k = mix(k, static_cast<std::uint64_t>(h.health));
  k = mix(k, static_cast<std::uint64_t>(h.max_health));
  k = mix(k, (h.attacked_this_turn ? 1u : 0u) | (h.frozen ? 2u : 0u));
  k = mix(k, static_cast<std::uint64_t>(h.mana_crystals));
  k = mix(k, static_cast<std::uint64_t>(h.mana_available));
  k = mix(k, static_cast<std::uint64_t>(h.fatigue_counter));
  k = mix(k, p.removed);
  k = mix(k, p.hand.size());
  return mix(k, p.board.size());
}

inline std::uint64_t weapon_key(int player, const HeroState& h) {
  if (!h.weapon) return key(Zone::Weapon, player, 0);
  std::uint64_t k = key(Zone::Weapon, player, 1);
  k = mix(k, static_cast<std::uint64_t>(h.weapon->attack));
  return mix(k, static_cast<std::uint64_t>(h.weapon->durability));
}

inline std::uint64_t hand_key(int player, std::size_t pos, CardId c) {
  return mix(key(Zone::Hand, player, pos), static_cast<std::uint64_t>(c));
}

inline std::uint64_t minion_key(int player, std::size_t pos, const Minion& m) {
  std::uint64_t k = key(Zone::Board, player, pos);
  k = mix(k, static_cast<std::uint64_t>(m.card));
  k = mix(k, static_cast<std::uint64_t>(m.attack));
  k = mix(k, static_cast<std::uint64_t>(m.health));
  k = mix(k, static_cast<std::uint64_t>(m.max_health));
  k = mix(k, static_cast<std::uint64_t>(m.tribe));
  std::uint64_t flags = (m.taunt ? 1u : 0u) | (m.frozen ? 2u : 0u) | (m.exhausted ? 4u : 0u) |
                        (m.has_charge ? 8u : 0u) | (m.attacked_this_turn ? 16u : 0u) | (m.doomed ? 32u : 0u);
  return mix(k, flags);
}

inline std::uint64_t deck_key(int player, const Deck& d) { return mix(key(Zone::Deck, player, 0), d.digest()); }

}  // namespace hash_detail

inline std::uint64_t state_hash(const GameState& s) {
  using namespace hash_detail;
  std::uint64_t h = global_key(s);
  for (int p = 0; p < 2; ++p) {
    const auto& pl = s.players[p];
    h ^= hero_key(p, pl);
    h ^= weapon_key(p, pl.hero);
    h ^= deck_key(p, pl.deck);
    for (std::size_t i = 0; i < pl.hand.size(); ++i) h ^= hand_key(p, i, pl.hand[i]);
    for (std::size_t i = 0; i < pl.board.size(); ++i) h ^= minion_key(p, i, pl.board[i]);
  }
  return h;
}

}  // namespace hsreduce
