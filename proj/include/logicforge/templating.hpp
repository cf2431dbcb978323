#pragma once

#include <cstdint>
#include <fstream>
#include <regex>
#include <string>
#include <vector>

#include <json.hpp>

#include "logicforge/errors.hpp"
#include "logicforge/generator.hpp"
#include "logicforge/lang.hpp"
#include "logicforge/rng.hpp"
#include "logicforge/text.hpp"

namespace logicforge {

// One narrative variant of a question. The body carries numbered markers
// [Slot 1]..[Slot arity]; rendering substitutes natural-language fills.
struct Template {
  std::string template_id;
  std::string family_id;
  Language language = Language::en;
  std::string body;
  int arity = 0;

  bool operator==(const Template&) const = default;
};

inline std::string slot_marker(int n) { return "[Slot " + std::to_string(n) + "]"; }

namespace detail {

inline const std::regex& slot_pattern() {
  static const std::regex re(R"(\[Slot [0-9]+\])");
  return re;
}

// Bracketed array/object literals in fill text defeat the natural-language
// contract; flag the obvious ones.
inline bool looks_like_raw_data(const std::string& s) {
  static const std::regex array_like(R"(\[\s*["0-9][^\]]*,[^\]]*\])");
  static const std::regex dict_like(R"(\{\s*['"][^}]*:[^}]*\})");
  return std::regex_search(s, array_like) || std::regex_search(s, dict_like);
}

} // namespace detail

struct TemplateReport {
  bool ok = true;
  std::vector<std::string> violations;
};

inline TemplateReport validate_template(const Template& t) {
  TemplateReport report;
  auto flag = [&report](std::string msg) {
    report.ok = false;
    report.violations.push_back(std::move(msg));
  };

  for (int n = 1; n <= t.arity; ++n) {
    if (!text::contains(t.body, slot_marker(n))) flag("missing " + slot_marker(n));
  }
  // Any marker outside 1..arity breaks numbering contiguity.
  auto begin = std::sregex_iterator(t.body.begin(), t.body.end(), detail::slot_pattern());
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    const std::string m = it->str();
    const int n = std::stoi(m.substr(6));
    if (n < 1 || n > t.arity) flag("unexpected marker " + m + " (arity " + std::to_string(t.arity) + ")");
  }
  if (detail::looks_like_raw_data(t.body)) flag("raw data format in body");
  return report;
}

// Pure textual substitution; every marker must disappear.
inline std::string render(const Template& t, const SlotFills& fills) {
  if (fills.language != t.language) {
    throw Error(Errc::language_mismatch,
                t.template_id + ": fills are " + to_string(fills.language) + ", template is " +
                    to_string(t.language));
  }
  if (static_cast<int>(fills.fills.size()) != t.arity) {
    throw Error(Errc::arity_mismatch,
                t.template_id + ": expected " + std::to_string(t.arity) + " fills, got " +
                    std::to_string(fills.fills.size()));
  }
  std::string out = t.body;
  for (int n = 1; n <= t.arity; ++n) {
    out = text::replace_all(std::move(out), slot_marker(n), fills.fills[static_cast<std::size_t>(n - 1)]);
  }
  if (std::regex_search(out, detail::slot_pattern())) {
    throw Error(Errc::residual_marker, t.template_id + ": unresolved slot marker after render");
  }
  return out;
}

// Deterministic uniform choice among a family's variants in one language.
inline const Template& pick_template(const std::vector<Template>& templates,
                                     const std::string& family_id, Language lang,
                                     std::uint64_t seed) {
  std::vector<const Template*> candidates;
  for (const auto& t : templates) {
    if (t.family_id == family_id && t.language == lang) candidates.push_back(&t);
  }
  if (candidates.empty()) {
    throw Error(Errc::no_template_for_language,
                family_id + " has no template for " + to_string(lang));
  }
  const std::uint64_t idx = derive_seed(seed, "template_pick") % candidates.size();
  return *candidates[idx];
}

// Fixed answer-format instruction appended to every rendered question so the
// final answer can be located mechanically.
inline std::string answer_directive(AnswerKind kind, Language lang) {
  if (lang == Language::en) {
    switch (kind) {
      case AnswerKind::value_set:
        return "Give your final answer inside <answer></answer> tags, separating entries with "
               "commas; write none if the answer is empty.";
      case AnswerKind::sequence:
        return "Give your final answer inside <answer></answer> tags, listing the IDs in order "
               "separated by \" -> \".";
      case AnswerKind::numeric:
        return "Give your final answer inside <answer></answer> tags, containing only the number.";
      case AnswerKind::single_value:
        return "Give your final answer inside <answer></answer> tags, containing only the answer.";
    }
  }
  switch (kind) {
    case AnswerKind::value_set:
      return "请把最终答案写在 <answer></answer> 标签内,多个条目之间用逗号分隔;若答案为空请写 none。";
    case AnswerKind::sequence:
      return "请把最终答案写在 <answer></answer> 标签内,按顺序列出编号,并用 \" -> \" 连接。";
    case AnswerKind::numeric:
      return "请把最终答案写在 <answer></answer> 标签内,只写数字。";
    case AnswerKind::single_value:
      return "请把最终答案写在 <answer></answer> 标签内,只写答案本身。";
  }
  return "";
}

inline std::string compose_question(const Template& t, const SlotFills& fills, AnswerKind kind) {
  return render(t, fills) + "\n\n" + answer_directive(kind, t.language);
}

// --- template file persistence (one file per family per language) ---

inline nlohmann::ordered_json templates_to_json(const std::vector<Template>& templates) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  if (!templates.empty()) {
    j["family_id"] = templates.front().family_id;
    j["language"] = to_string(templates.front().language);
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& t : templates) {
    arr.push_back({{"template_id", t.template_id}, {"arity", t.arity}, {"body", t.body}});
  }
  j["templates"] = std::move(arr);
  return j;
}

inline std::vector<Template> templates_from_json(const nlohmann::json& j) {
  std::vector<Template> out;
  const std::string family = j.at("family_id").get<std::string>();
  const Language lang = language_from_string(j.at("language").get<std::string>());
  for (const auto& t : j.at("templates")) {
    Template tpl;
    tpl.template_id = t.at("template_id").get<std::string>();
    tpl.family_id = family;
    tpl.language = lang;
    tpl.arity = t.at("arity").get<int>();
    tpl.body = t.at("body").get<std::string>();
    out.push_back(std::move(tpl));
  }
  return out;
}

inline void save_templates(const std::vector<Template>& templates, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::config_error, "cannot write " + path);
  out << templates_to_json(templates).dump(2) << "\n";
}

inline std::vector<Template> load_templates(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::config_error, "cannot read " + path);
  nlohmann::json j;
  in >> j;
  return templates_from_json(j);
}

} // namespace logicforge
