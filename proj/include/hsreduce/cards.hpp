#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace hsreduce {

enum class CardId : std::uint8_t {
  Innervate,
  ArcaneIntellect,
  FrostNova,
  Backstab,
  MortalCoil,
  Demonfuse,
  MarkOfYShaarj,
  BlessedChampion,
  Charge,
  ShadowWordDeath,
  MindControl,
  FlashHeal,
  LightsJustice,
  NoviceEngineer,
  GadgetzanAuctioneer,
  WeeSpellstopper,
  LeperGnome,
  MistressOfMixtures,
  FloatingWatcher,
  Gahzrilla,
};

inline constexpr std::size_t kCardCount = 20;

enum class CardKind : std::uint8_t { Minion, Spell, Weapon };
enum class Tribe : std::uint8_t { None, Beast, Demon };

// One variant per distinct card behaviour. Closed set: the engine switches on it.
enum class EffectTag : std::uint8_t {
  GainTwoMana,
  DrawTwo,
  FreezeEnemyMinions,
  DealTwoToUndamagedMinion,
  DealOneDrawIfKill,
  BuffDemonPlus3Plus3,
  BuffPlus2Plus2DrawIfBeast,
  DoubleAttack,
  GiveChargePlus2Attack,
  DestroyMinionAtk5Plus,
  TakeControlEnemyMinion,
  RestoreFiveHealth,
  BattlecryDrawOne,
  TriggerDrawOnFriendlySpell,
  TriggerAdjacentSpellImmunity,
  DeathrattleDamageEnemyHero2,
  DeathrattleRestore4EachHero,
  TriggerDoubleAttackOnDamage,
  NoEffect,
};

struct CardSpec {
  CardId id;
  std::string_view name;  // doubles as the stable string id
  int cost;
  CardKind kind;
  int attack;               // 0 for spells
  int health_or_durability; // 0 for spells
  Tribe tribe;
  bool taunt;
  bool charge;
  EffectTag effect;
};

namespace detail {
using K = CardKind;
using T = Tribe;
using E = EffectTag;

inline constexpr std::array<CardSpec, kCardCount> kCards{{
    {CardId::Innervate, "Innervate", 0, K::Spell, 0, 0, T::None, false, false, E::GainTwoMana},
    {CardId::ArcaneIntellect, "Arcane Intellect", 3, K::Spell, 0, 0, T::None, false, false, E::DrawTwo},
    {CardId::FrostNova, "Frost Nova", 3, K::Spell, 0, 0, T::None, false, false, E::FreezeEnemyMinions},
    {CardId::Backstab, "Backstab", 0, K::Spell, 0, 0, T::None, false, false, E::DealTwoToUndamagedMinion},
    {CardId::MortalCoil, "Mortal Coil", 1, K::Spell, 0, 0, T::None, false, false, E::DealOneDrawIfKill},
    {CardId::Demonfuse, "Demonfuse", 2, K::Spell, 0, 0, T::None, false, false, E::BuffDemonPlus3Plus3},
    {CardId::MarkOfYShaarj, "Mark of Y'Shaarj", 2, K::Spell, 0, 0, T::None, false, false,
     E::BuffPlus2Plus2DrawIfBeast},
    {CardId::BlessedChampion, "Blessed Champion", 5, K::Spell, 0, 0, T::None, false, false, E::DoubleAttack},
    {CardId::Charge, "Charge", 3, K::Spell, 0, 0, T::None, false, false, E::GiveChargePlus2Attack},
    {CardId::ShadowWordDeath, "Shadow Word: Death", 3, K::Spell, 0, 0, T::None, false, false,
     E::DestroyMinionAtk5Plus},
    {CardId::MindControl, "Mind Control", 10, K::Spell, 0, 0, T::None, false, false, E::TakeControlEnemyMinion},
    {CardId::FlashHeal, "Flash Heal", 1, K::Spell, 0, 0, T::None, false, false, E::RestoreFiveHealth},
    {CardId::LightsJustice, "Light's Justice", 1, K::Weapon, 1, 4, T::None, false, false, E::NoEffect},
    {CardId::NoviceEngineer, "Novice Engineer", 2, K::Minion, 1, 1, T::None, false, false, E::BattlecryDrawOne},
    {CardId::GadgetzanAuctioneer, "Gadgetzan Auctioneer", 6, K::Minion, 4, 4, T::None, false, false,
     E::TriggerDrawOnFriendlySpell},
    {CardId::WeeSpellstopper, "Wee Spellstopper", 4, K::Minion, 2, 5, T::None, false, false,
     E::TriggerAdjacentSpellImmunity},
    {CardId::LeperGnome, "Leper Gnome", 1, K::Minion, 2, 1, T::None, false, false, E::DeathrattleDamageEnemyHero2},
    {CardId::MistressOfMixtures, "Mistress of Mixtures", 1, K::Minion, 2, 2, T::None, false, false,
     E::DeathrattleRestore4EachHero},
    {CardId::FloatingWatcher, "Floating Watcher", 5, K::Minion, 4, 4, T::Demon, false, false, E::NoEffect},
    {CardId::Gahzrilla, "Gahz'rilla", 7, K::Minion, 6, 9, T::Beast, false, false,
     E::TriggerDoubleAttackOnDamage},
}};
}  // namespace detail

inline constexpr const std::array<CardSpec, kCardCount>& card_database() { return detail::kCards; }

inline constexpr const CardSpec& card(CardId id) { return detail::kCards[static_cast<std::size_t>(id)]; }

inline constexpr std::string_view card_name(CardId id) { return card(id).name; }

inline std::optional<CardId> find_card(std::string_view name) {
  for (const auto& c : detail::kCards)
    if (c.name == name) return c.id;
  return std::nullopt;
}

class UnknownCard : public std::runtime_error {
 public:
  explicit UnknownCard(std::string_view name) : std::runtime_error("unknown card: " + std::string(name)) {}
};

inline CardId card_by_name(std::string_view name) {
  if (auto id = find_card(name)) return *id;
  throw UnknownCard(name);
}

inline constexpr std::string_view to_string(CardKind k) {
  switch (k) {
    case CardKind::Minion: return "minion";
    case CardKind::Spell: return "spell";
    case CardKind::Weapon: return "weapon";
  }
  return "?";
}

inline constexpr std::string_view to_string(Tribe t) {
  switch (t) {
    case Tribe::None: return "none";
    case Tribe::Beast: return "beast";
    case Tribe::Demon: return "demon";
  }
  return "?";
}

inline constexpr std::string_view to_string(EffectTag e) {
  switch (e) {
    case EffectTag::GainTwoMana: return "GainTwoMana";
    case EffectTag::DrawTwo: return "DrawTwo";
    case EffectTag::FreezeEnemyMinions: return "FreezeEnemyMinions";
    case EffectTag::DealTwoToUndamagedMinion: return "DealTwoToUndamagedMinion";
    case EffectTag::DealOneDrawIfKill: return "DealOneDrawIfKill";
    case EffectTag::BuffDemonPlus3Plus3: return "BuffDemonPlus3Plus3";
    case EffectTag::BuffPlus2Plus2DrawIfBeast: return "BuffPlus2Plus2DrawIfBeast";
    case EffectTag::DoubleAttack: return "DoubleAttack";
    case EffectTag::GiveChargePlus2Attack: return "GiveChargePlus2Attack";
    case EffectTag::DestroyMinionAtk5Plus: return "DestroyMinionAtk5Plus";
    case EffectTag::TakeControlEnemyMinion: return "TakeControlEnemyMinion";
    case EffectTag::RestoreFiveHealth: return "RestoreFiveHealth";
    case EffectTag::BattlecryDrawOne: return "BattlecryDrawOne";
    case EffectTag::TriggerDrawOnFriendlySpell: return "TriggerDrawOnFriendlySpell";
    case EffectTag::TriggerAdjacentSpellImmunity: return "TriggerAdjacentSpellImmunity";
    case EffectTag::DeathrattleDamageEnemyHero2: return "DeathrattleDamageEnemyHero2";
    case EffectTag::DeathrattleRestore4EachHero: return "DeathrattleRestore4EachHero";
    case EffectTag::TriggerDoubleAttackOnDamage: return "TriggerDoubleAttackOnDamage";
    case EffectTag::NoEffect: return "NoEffect";
  }
  return "?";
}

inline nlohmann::json card_to_json(const CardSpec& c) {
  nlohmann::json j;
  j["name"] = std::string(c.name);
  j["cost"] = c.cost;
  j["kind"] = std::string(to_string(c.kind));
  if (c.kind != CardKind::Spell) {
    j["attack"] = c.attack;
    j[c.kind == CardKind::Weapon ? "durability" : "health"] = c.health_or_durability;
  }
  j["tribe"] = std::string(to_string(c.tribe));
  auto kw = nlohmann::json::array();
  if (c.taunt) kw.push_back("taunt");
  if (c.charge) kw.push_back("charge");
  j["keywords"] = kw;
  j["effect"] = std::string(to_string(c.effect));
  return j;
}

// Keyed by card id; nlohmann's object is an ordered std::map so the dump is byte-stable.
inline nlohmann::json card_table_json() {
  nlohmann::json cards = nlohmann::json::object();
  for (const auto& c : card_database()) cards[std::string(c.name)] = card_to_json(c);
  return {{"formatVersion", 1}, {"cards", cards}};
}

}  // namespace hsreduce
