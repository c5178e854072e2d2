#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <boost/container/static_vector.hpp>

#include "hsreduce/cards.hpp"

namespace hsreduce {

inline constexpr std::size_t kMaxBoard = 7;
inline constexpr std::size_t kMaxHand = 10;
inline constexpr int kMaxMana = 10;
inline constexpr int kDefaultTurnLimit = 500;

// Player 0 is the friendly side, player 1 the enemy side.
inline constexpr int kFriendly = 0;
inline constexpr int kEnemy = 1;

enum class Outcome : std::uint8_t { Ongoing, FriendlyWins, EnemyWins, Draw };

inline constexpr std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Ongoing: return "ongoing";
    case Outcome::FriendlyWins: return "friendly_wins";
    case Outcome::EnemyWins: return "enemy_wins";
    case Outcome::Draw: return "draw";
  }
  return "?";
}

struct Minion {
  CardId card{};
  std::int64_t attack = 0;
  std::int64_t health = 1;
  std::int64_t max_health = 1;
  Tribe tribe = Tribe::None;
  bool taunt = false;
  bool frozen = false;
  bool exhausted = false;
  bool has_charge = false;
  bool attacked_this_turn = false;
  bool doomed = false;  // destroy effect pending death processing
  std::uint32_t instance_id = 0;

  bool damaged() const { return health < max_health; }
  bool operator==(const Minion&) const = default;
};

struct Weapon {
  std::int64_t attack = 0;
  std::int64_t durability = 0;
  bool operator==(const Weapon&) const = default;
};

struct HeroState {
  std::int64_t health = 30;
  std::int64_t max_health = 30;
  std::optional<Weapon> weapon;
  bool attacked_this_turn = false;
  bool frozen = false;
  int mana_crystals = 0;
  int mana_available = 0;
  int fatigue_counter = 0;
  bool operator==(const HeroState&) const = default;
};

// Decks never grow during play, so the card list is shared and only the cursor moves.
class Deck {
 public:
  Deck() : Deck(std::vector<CardId>{}) {}
  explicit Deck(std::vector<CardId> cards);

  std::size_t size() const { return data_->cards.size() - cursor_; }
  bool empty() const { return size() == 0; }
  CardId top() const { return data_->cards[cursor_]; }
  void pop() { ++cursor_; }
  std::span<const CardId> remaining() const {
    return std::span<const CardId>(data_->cards).subspan(cursor_);
  }
  // Order-sensitive digest of the remaining cards; O(1).
  std::uint64_t digest() const { return data_->suffix[cursor_]; }

  bool operator==(const Deck& o) const {
    if (size() != o.size()) return false;
    auto a = remaining(), b = o.remaining();
    return std::equal(a.begin(), a.end(), b.begin());
  }

 private:
  struct Data {
    std::vector<CardId> cards;
    std::vector<std::uint64_t> suffix;
  };
  std::shared_ptr<const Data> data_;
  std::size_t cursor_ = 0;
};

struct PlayerState {
  HeroState hero;
  Deck deck;
  boost::container::static_vector<CardId, kMaxHand> hand;
  boost::container::static_vector<Minion, kMaxBoard> board;
  // Cards consumed: cast spells, dead minions, destroyed weapons, burned draws.
  std::uint32_t removed = 0;
  bool operator==(const PlayerState&) const = default;
};

struct GameState {
  std::array<PlayerState, 2> players;
  int active = kFriendly;
  int turn_number = 1;
  int turn_limit = kDefaultTurnLimit;
  Outcome outcome = Outcome::Ongoing;
  std::uint32_t next_instance_id = 1;

  PlayerState& me() { return players[active]; }
  const PlayerState& me() const { return players[active]; }
  PlayerState& opp() { return players[1 - active]; }
  const PlayerState& opp() const { return players[1 - active]; }
  bool operator==(const GameState&) const = default;
};

// A character on the table: a hero or the minion at a board slot. `side` is absolute.
struct CharRef {
  std::uint8_t side = 0;
  std::int8_t slot = -1;  // -1 selects the hero

  static CharRef hero(int side) { return {static_cast<std::uint8_t>(side), -1}; }
  static CharRef minion(int side, int slot) {
    return {static_cast<std::uint8_t>(side), static_cast<std::int8_t>(slot)};
  }
  bool is_hero() const { return slot < 0; }
  auto operator<=>(const CharRef&) const = default;
};

struct PlayCard {
  std::uint8_t hand_index = 0;
  std::optional<CharRef> target;
  std::optional<std::uint8_t> position;
  auto operator<=>(const PlayCard&) const = default;
};

struct Attack {
  CharRef attacker;
  CharRef defender;
  auto operator<=>(const Attack&) const = default;
};

struct EndTurn {
  auto operator<=>(const EndTurn&) const = default;
};

using Action = std::variant<PlayCard, Attack, EndTurn>;

// ---------------------------------------------------------------------------

namespace detail {
inline constexpr std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

inline Deck::Deck(std::vector<CardId> cards) {
  auto d = std::make_shared<Data>();
  d->cards = std::move(cards);
  d->suffix.assign(d->cards.size() + 1, 0);
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  d->suffix[d->cards.size()] = h;
  for (std::size_t i = d->cards.size(); i-- > 0;) {
    h = detail::splitmix(h ^ (static_cast<std::uint64_t>(d->cards[i]) + 1));
    d->suffix[i] = h;
  }
  data_ = std::move(d);
}

inline Minion make_minion(CardId id) {
  const auto& c = card(id);
  Minion m;
  m.card = id;
  m.attack = c.attack;
  m.health = m.max_health = c.health_or_durability;
  m.tribe = c.tribe;
  m.taunt = c.taunt;
  m.has_charge = c.charge;
  return m;
}

}  // namespace hsreduce
