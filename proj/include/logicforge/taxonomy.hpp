#pragma once

#include <array>
#include <string>
#include <string_view>

#include "logicforge/errors.hpp"

namespace logicforge {

// Three orthogonal axes; any combination is representable.

enum class TaskDomain {
  symbolic_manipulation,
  numerical_manipulation,
  textual_manipulation,
  object_manipulation,
  planning_scheduling,
  classic_games,
  spatial_geometry,
  spatial_pathfinding,
  spatial_visual_to_text,
  cross_topic,
  others,
};

enum class CoreAbility {
  constraint_satisfaction,
  algorithmic_thinking,
  info_extraction_integration,
  item_connection_mapping,
  instruction_following,
  others,
};

enum class DifficultySource {
  complex_rules,
  complex_conditions,
  large_search_space,
  tedious_solution_steps,
  computational_complexity,
  intrinsic_llm_weaknesses,
  others,
};

namespace detail {

inline constexpr std::array<std::string_view, 11> kTaskDomainNames = {
    "symbolic_manipulation", "numerical_manipulation", "textual_manipulation",
    "object_manipulation",   "planning_scheduling",    "classic_games",
    "spatial_geometry",      "spatial_pathfinding",    "spatial_visual_to_text",
    "cross_topic",           "others"};

inline constexpr std::array<std::string_view, 6> kCoreAbilityNames = {
    "constraint_satisfaction", "algorithmic_thinking", "info_extraction_integration",
    "item_connection_mapping", "instruction_following", "others"};

inline constexpr std::array<std::string_view, 7> kDifficultySourceNames = {
    "complex_rules",         "complex_conditions",       "large_search_space",
    "tedious_solution_steps", "computational_complexity", "intrinsic_llm_weaknesses",
    "others"};

template <class Enum, std::size_t N>
Enum enum_from_string(const std::array<std::string_view, N>& names, std::string_view s,
                      const char* axis) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == s) return static_cast<Enum>(i);
  }
  throw Error(Errc::config_error, std::string("unknown ") + axis + " '" + std::string(s) + "'");
}

} // namespace detail

inline std::string_view to_string(TaskDomain d) {
  return detail::kTaskDomainNames[static_cast<std::size_t>(d)];
}
inline std::string_view to_string(CoreAbility a) {
  return detail::kCoreAbilityNames[static_cast<std::size_t>(a)];
}
inline std::string_view to_string(DifficultySource s) {
  return detail::kDifficultySourceNames[static_cast<std::size_t>(s)];
}

inline TaskDomain task_domain_from_string(std::string_view s) {
  return detail::enum_from_string<TaskDomain>(detail::kTaskDomainNames, s, "task_domain");
}
inline CoreAbility core_ability_from_string(std::string_view s) {
  return detail::enum_from_string<CoreAbility>(detail::kCoreAbilityNames, s, "core_ability");
}
inline DifficultySource difficulty_source_from_string(std::string_view s) {
  return detail::enum_from_string<DifficultySource>(detail::kDifficultySourceNames, s,
                                                    "difficulty_source");
}

struct TaxonomyLabel {
  TaskDomain task_domain = TaskDomain::others;
  CoreAbility core_ability = CoreAbility::others;
  DifficultySource difficulty_source = DifficultySource::others;

  bool operator==(const TaxonomyLabel&) const = default;
};

} // namespace logicforge
