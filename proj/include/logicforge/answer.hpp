#pragma once

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "logicforge/errors.hpp"
#include "logicforge/lang.hpp"
#include "logicforge/text.hpp"

namespace logicforge {

enum class AnswerKind { single_value, value_set, sequence, numeric };

inline const char* to_string(AnswerKind k) {
  switch (k) {
    case AnswerKind::single_value: return "single_value";
    case AnswerKind::value_set: return "value_set";
    case AnswerKind::sequence: return "sequence";
    case AnswerKind::numeric: return "numeric";
  }
  return "single_value";
}

inline AnswerKind answer_kind_from_string(std::string_view s) {
  if (s == "single_value") return AnswerKind::single_value;
  if (s == "value_set") return AnswerKind::value_set;
  if (s == "sequence") return AnswerKind::sequence;
  if (s == "numeric") return AnswerKind::numeric;
  throw Error(Errc::config_error, "unknown answer_kind '" + std::string(s) + "'");
}

// Tagged union matching AnswerKind: single string / string set / ordered
// sequence / number.
using Answer = std::variant<std::string, std::set<std::string>, std::vector<std::string>, double>;

inline AnswerKind kind_of(const Answer& a) {
  switch (a.index()) {
    case 0: return AnswerKind::single_value;
    case 1: return AnswerKind::value_set;
    case 2: return AnswerKind::sequence;
    default: return AnswerKind::numeric;
  }
}

namespace detail {

inline std::string norm_elem(std::string_view s) { return text::lower_ascii(text::normalize(s)); }

} // namespace detail

// Comparison is normalization-insensitive for text (case, punctuation width,
// spacing) and tolerance-based for numbers.
inline bool answers_equal(const Answer& a, const Answer& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<std::string>(a)) {
    return detail::norm_elem(std::get<std::string>(a)) == detail::norm_elem(std::get<std::string>(b));
  }
  if (std::holds_alternative<std::set<std::string>>(a)) {
    std::set<std::string> na, nb;
    for (const auto& e : std::get<std::set<std::string>>(a)) na.insert(detail::norm_elem(e));
    for (const auto& e : std::get<std::set<std::string>>(b)) nb.insert(detail::norm_elem(e));
    return na == nb;
  }
  if (std::holds_alternative<std::vector<std::string>>(a)) {
    const auto& va = std::get<std::vector<std::string>>(a);
    const auto& vb = std::get<std::vector<std::string>>(b);
    if (va.size() != vb.size()) return false;
    for (std::size_t i = 0; i < va.size(); ++i) {
      if (detail::norm_elem(va[i]) != detail::norm_elem(vb[i])) return false;
    }
    return true;
  }
  return std::fabs(std::get<double>(a) - std::get<double>(b)) <= 1e-9;
}

// Deterministic answer paired with a per-language canonical rendering.
// Built-in families keep the rendering language-neutral (IDs, names, yes/no)
// so the same seed yields identical answers in every language.
struct GroundTruth {
  Answer value;
  std::map<Language, std::string> canonical_text;

  const std::string& canonical(Language lang) const {
    auto it = canonical_text.find(lang);
    if (it == canonical_text.end()) {
      throw Error(Errc::unsupported_language,
                  std::string("no canonical answer text for ") + to_string(lang));
    }
    return it->second;
  }

  bool operator==(const GroundTruth&) const = default;
};

} // namespace logicforge
