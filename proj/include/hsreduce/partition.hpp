#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace hsreduce {

class InvalidInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PartitionInstance {
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;  // (x_i, y_i)
  std::int64_t target = 0;

  std::size_t n() const { return pairs.size(); }
  bool operator==(const PartitionInstance&) const = default;
};

enum class Choice : std::uint8_t { X, Y };

inline char to_char(Choice c) { return c == Choice::X ? 'x' : 'y'; }

inline std::int64_t value_of(const PartitionInstance& inst, std::size_t i, Choice c) {
  return c == Choice::X ? inst.pairs[i].first : inst.pairs[i].second;
}

inline void validate(const PartitionInstance& inst) {
  if (inst.pairs.empty()) throw InvalidInstance("instance needs at least one pair");
  if (inst.target < 0) throw InvalidInstance("target must be non-negative");
  for (const auto& [x, y] : inst.pairs)
    if (x < 0 || y < 0) throw InvalidInstance("values must be non-negative");
}

inline nlohmann::json to_json(const PartitionInstance& inst) {
  auto pairs = nlohmann::json::array();
  for (const auto& [x, y] : inst.pairs) pairs.push_back({x, y});
  return {{"pairs", pairs}, {"target", inst.target}};
}

inline PartitionInstance instance_from_json(const nlohmann::json& j) {
  PartitionInstance inst;
  try {
    for (const auto& p : j.at("pairs")) {
      if (!p.is_array() || p.size() != 2) throw InvalidInstance("each pair needs two integers");
      inst.pairs.emplace_back(p[0].get<std::int64_t>(), p[1].get<std::int64_t>());
    }
    inst.target = j.at("target").get<std::int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInstance(std::string("malformed instance: ") + e.what());
  }
  validate(inst);
  return inst;
}

inline std::vector<Choice> choices_from_string(const std::string& s) {
  std::vector<Choice> out;
  for (char c : s) {
    if (c == 'x' || c == 'X') out.push_back(Choice::X);
    else if (c == 'y' || c == 'Y') out.push_back(Choice::Y);
    else if (c == ',' || c == ' ') continue;
    else throw InvalidInstance(std::string("bad choice character '") + c + "'");
  }
  return out;
}

inline std::string choices_to_string(const std::vector<Choice>& cs) {
  std::string s;
  for (Choice c : cs) s += to_char(c);
  return s;
}

// Shifts the instance into the shape the compiler needs without changing who wins:
// every pair containing a 0 gets +1 on both sides (and T+1), and an odd n gets a
// trailing (1,1) pair (and T+1) so that the friendly side moves first and last.
inline PartitionInstance normalize(const PartitionInstance& inst) {
  PartitionInstance out = inst;
  for (auto& [x, y] : out.pairs) {
    if (x == 0 || y == 0) {
      ++x;
      ++y;
      ++out.target;
    }
  }
  if (out.pairs.size() % 2 == 1) {
    out.pairs.emplace_back(1, 1);
    ++out.target;
  }
  return out;
}

inline std::int64_t max_value(const PartitionInstance& inst) {
  std::int64_t m = inst.target;
  for (const auto& [x, y] : inst.pairs) m = std::max({m, x, y});
  return m;
}

}  // namespace hsreduce
