#pragma once

#include <fstream>
#include <set>
#include <string>
#include <string_view>

#include <json.hpp>

#include "logicforge/answer.hpp"
#include "logicforge/errors.hpp"
#include "logicforge/ladder.hpp"
#include "logicforge/lang.hpp"
#include "logicforge/taxonomy.hpp"

namespace logicforge {

enum class ScoringMethod { accuracy, f1, similarity, abs_diff_rate };

inline const char* to_string(ScoringMethod m) {
  switch (m) {
    case ScoringMethod::accuracy: return "accuracy";
    case ScoringMethod::f1: return "f1";
    case ScoringMethod::similarity: return "similarity";
    case ScoringMethod::abs_diff_rate: return "abs_diff_rate";
  }
  return "accuracy";
}

inline ScoringMethod scoring_method_from_string(std::string_view s) {
  if (s == "accuracy") return ScoringMethod::accuracy;
  if (s == "f1") return ScoringMethod::f1;
  if (s == "similarity") return ScoringMethod::similarity;
  if (s == "abs_diff_rate") return ScoringMethod::abs_diff_rate;
  throw Error(Errc::config_error, "unknown scoring_method '" + std::string(s) + "'");
}

// F1 needs sets; absolute difference needs numbers; accuracy and similarity
// work on exact-match / string-shaped answers.
inline bool scoring_compatible(ScoringMethod m, AnswerKind k) {
  switch (m) {
    case ScoringMethod::accuracy:
      return k == AnswerKind::single_value || k == AnswerKind::sequence || k == AnswerKind::numeric;
    case ScoringMethod::f1: return k == AnswerKind::value_set;
    case ScoringMethod::similarity: return k == AnswerKind::single_value || k == AnswerKind::sequence;
    case ScoringMethod::abs_diff_rate: return k == AnswerKind::numeric;
  }
  return false;
}

struct TaskDescriptor {
  std::string family_id;
  TaxonomyLabel taxonomy;
  DifficultyLadder ladder;
  ScoringMethod scoring_method = ScoringMethod::accuracy;
  AnswerKind answer_kind = AnswerKind::single_value;
  std::set<Language> languages;

  bool operator==(const TaskDescriptor&) const = default;

  bool supports(Language lang) const { return languages.count(lang) > 0; }
};

// --- JSON persistence (one human-editable file per family) ---

inline nlohmann::ordered_json ladder_to_json(const DifficultyLadder& ladder) {
  nlohmann::ordered_json j;
  j["complexity_params"] = ladder.complexity_params;
  j["integer_params"] = ladder.integer_params;
  nlohmann::ordered_json levels;
  for (const auto& [level, bag] : ladder.levels) {
    nlohmann::ordered_json b;
    for (const auto& [name, value] : bag) {
      if (ladder.integer_params.count(name)) {
        b[name] = static_cast<long long>(value);
      } else {
        b[name] = value;
      }
    }
    levels[std::to_string(level)] = std::move(b);
  }
  j["levels"] = std::move(levels);
  return j;
}

inline DifficultyLadder ladder_from_json(const nlohmann::json& j) {
  DifficultyLadder ladder;
  ladder.complexity_params = j.at("complexity_params").get<std::vector<std::string>>();
  ladder.integer_params = j.at("integer_params").get<std::set<std::string>>();
  for (const auto& [key, bag] : j.at("levels").items()) {
    ParamBag b;
    for (const auto& [name, value] : bag.items()) b[name] = value.get<double>();
    ladder.levels[std::stoi(key)] = std::move(b);
  }
  return ladder;
}

inline nlohmann::ordered_json descriptor_to_json(const TaskDescriptor& d) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["family_id"] = d.family_id;
  j["taxonomy"] = {{"task_domain", to_string(d.taxonomy.task_domain)},
                   {"core_ability", to_string(d.taxonomy.core_ability)},
                   {"difficulty_source", to_string(d.taxonomy.difficulty_source)}};
  j["answer_kind"] = to_string(d.answer_kind);
  j["scoring_method"] = to_string(d.scoring_method);
  std::vector<std::string> langs;
  for (Language l : d.languages) langs.push_back(to_string(l));
  j["languages"] = langs;
  j["ladder"] = ladder_to_json(d.ladder);
  return j;
}

inline TaskDescriptor descriptor_from_json(const nlohmann::json& j) {
  TaskDescriptor d;
  d.family_id = j.at("family_id").get<std::string>();
  const auto& tax = j.at("taxonomy");
  d.taxonomy.task_domain = task_domain_from_string(tax.at("task_domain").get<std::string>());
  d.taxonomy.core_ability = core_ability_from_string(tax.at("core_ability").get<std::string>());
  d.taxonomy.difficulty_source =
      difficulty_source_from_string(tax.at("difficulty_source").get<std::string>());
  d.answer_kind = answer_kind_from_string(j.at("answer_kind").get<std::string>());
  d.scoring_method = scoring_method_from_string(j.at("scoring_method").get<std::string>());
  for (const auto& l : j.at("languages")) d.languages.insert(language_from_string(l.get<std::string>()));
  d.ladder = ladder_from_json(j.at("ladder"));
  if (!scoring_compatible(d.scoring_method, d.answer_kind)) {
    throw Error(Errc::method_kind_mismatch,
                d.family_id + ": scoring_method incompatible with answer_kind");
  }
  const LadderReport ladder_check = validate_ladder(d.ladder);
  if (!ladder_check.ok) {
    throw Error(Errc::config_error,
                d.family_id + ": invalid ladder: " + ladder_check.violations.front());
  }
  return d;
}

inline void save_descriptor(const TaskDescriptor& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::config_error, "cannot write " + path);
  out << descriptor_to_json(d).dump(2) << "\n";
}

inline TaskDescriptor load_descriptor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::config_error, "cannot read " + path);
  nlohmann::json j;
  in >> j;
  return descriptor_from_json(j);
}

} // namespace logicforge
