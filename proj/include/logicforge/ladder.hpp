#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace logicforge {

using ParamBag = std::map<std::string, double>;

// The 1..10 difficulty ladder: level -> named generator parameters.
// Complexity parameters are the designated knobs that must be non-decreasing
// in level; integer parameters are rounded whenever levels are interpolated.
struct DifficultyLadder {
  static constexpr int kMinLevel = 1;
  static constexpr int kMaxLevel = 10;

  std::map<int, ParamBag> levels;
  std::vector<std::string> complexity_params;
  std::set<std::string> integer_params;

  bool operator==(const DifficultyLadder&) const = default;

  const ParamBag& at(int level) const { return levels.at(level); }
  bool has_level(int level) const { return levels.count(level) > 0; }
};

struct LadderReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Checks that all 10 levels are present and every complexity parameter is
// non-decreasing across them (equality at adjacent levels is allowed).
inline LadderReport validate_ladder(const DifficultyLadder& ladder) {
  LadderReport report;
  auto flag = [&report](std::string msg) {
    report.ok = false;
    report.violations.push_back(std::move(msg));
  };

  for (int level = DifficultyLadder::kMinLevel; level <= DifficultyLadder::kMaxLevel; ++level) {
    if (!ladder.has_level(level)) flag("missing level " + std::to_string(level));
  }
  for (const auto& [level, bag] : ladder.levels) {
    if (level < DifficultyLadder::kMinLevel || level > DifficultyLadder::kMaxLevel) {
      flag("level " + std::to_string(level) + " outside 1..10");
    }
    for (const auto& name : ladder.complexity_params) {
      if (!bag.count(name)) {
        flag("level " + std::to_string(level) + " missing parameter " + name);
      }
    }
  }
  for (const auto& name : ladder.complexity_params) {
    const ParamBag* prev = nullptr;
    int prev_level = 0;
    for (const auto& [level, bag] : ladder.levels) {
      auto it = bag.find(name);
      if (it == bag.end()) continue;
      if (prev) {
        auto pit = prev->find(name);
        if (pit != prev->end() && it->second < pit->second) {
          flag(name + " decreases " + std::to_string(prev_level) + "->" + std::to_string(level));
        }
      }
      prev = &bag;
      prev_level = level;
    }
  }
  return report;
}

} // namespace logicforge
