#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "logicforge/answer.hpp"
#include "logicforge/descriptor.hpp"
#include "logicforge/errors.hpp"
#include "logicforge/text.hpp"

namespace logicforge {

enum class RewardScheme { binary, graded, bipolar };

inline const char* to_string(RewardScheme s) {
  switch (s) {
    case RewardScheme::binary: return "binary";
    case RewardScheme::graded: return "graded";
    case RewardScheme::bipolar: return "bipolar";
  }
  return "binary";
}

inline RewardScheme reward_scheme_from_string(std::string_view s) {
  if (s == "binary") return RewardScheme::binary;
  if (s == "graded") return RewardScheme::graded;
  if (s == "bipolar") return RewardScheme::bipolar;
  throw Error(Errc::config_error, "unknown reward scheme '" + std::string(s) + "'");
}

inline constexpr const char* kAnswerOpen = "<answer>";
inline constexpr const char* kAnswerClose = "</answer>";

struct ExtractedAnswer {
  std::string raw;
  std::optional<Answer> parsed;
  bool format_ok = false;
};

namespace rewards_detail {

inline bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) return false;
  for (const char* p = end; *p; ++p) {
    if (!std::isspace(static_cast<unsigned char>(*p)) && *p != '.') return false;
  }
  out = v;
  return true;
}

inline std::vector<std::string> split_elements(const std::string& normalized) {
  // Sequences may arrive arrow-joined; sets comma-joined. Normalization has
  // already folded full-width commas and CJK separators to ','.
  std::string s = text::replace_all(normalized, "→", "->");
  std::vector<std::string> parts;
  const bool arrows = text::contains(s, "->");
  for (auto& piece : text::split(s, arrows ? "->" : ",")) {
    std::string e = text::trim(piece);
    if (!e.empty()) parts.push_back(std::move(e));
  }
  return parts;
}

inline bool means_empty(const std::string& normalized) {
  const std::string lowered = text::lower_ascii(normalized);
  return lowered == "none" || lowered == "nobody" || lowered == "无" || lowered == "没有";
}

} // namespace rewards_detail

// Locates the final <answer>...</answer> block and parses it for the given
// answer kind. Robust to spacing, punctuation width, and casing drift; a
// missing or unparseable block yields format_ok=false with no parsed value.
inline ExtractedAnswer extract_answer(const std::string& response, AnswerKind kind,
                                      Language /*language*/ = Language::en) {
  ExtractedAnswer out;
  out.raw = response;
  const std::size_t open = response.rfind(kAnswerOpen);
  if (open == std::string::npos) return out;
  const std::size_t body_begin = open + std::string_view(kAnswerOpen).size();
  const std::size_t close = response.find(kAnswerClose, body_begin);
  if (close == std::string::npos) return out;
  const std::string normalized = text::normalize(response.substr(body_begin, close - body_begin));

  switch (kind) {
    case AnswerKind::single_value: {
      if (normalized.empty()) return out;
      out.parsed = Answer{normalized};
      break;
    }
    case AnswerKind::value_set: {
      std::set<std::string> values;
      if (!rewards_detail::means_empty(normalized)) {
        for (auto& e : rewards_detail::split_elements(normalized)) values.insert(std::move(e));
        if (values.empty() && !normalized.empty()) return out;
      }
      out.parsed = Answer{std::move(values)};
      break;
    }
    case AnswerKind::sequence: {
      std::vector<std::string> values = rewards_detail::split_elements(normalized);
      if (values.empty()) return out;
      out.parsed = Answer{std::move(values)};
      break;
    }
    case AnswerKind::numeric: {
      double v = 0.0;
      if (!rewards_detail::parse_number(normalized, v)) return out;
      out.parsed = Answer{v};
      break;
    }
  }
  out.format_ok = true;
  return out;
}

namespace rewards_detail {

inline std::set<std::string> norm_set(const std::set<std::string>& in) {
  std::set<std::string> out;
  for (const auto& e : in) out.insert(detail::norm_elem(e));
  return out;
}

inline std::vector<std::string> norm_seq(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  out.reserve(in.size());
  for (const auto& e : in) out.push_back(detail::norm_elem(e));
  return out;
}

inline std::string as_string(const Answer& a) {
  if (std::holds_alternative<std::string>(a)) return detail::norm_elem(std::get<std::string>(a));
  if (std::holds_alternative<std::vector<std::string>>(a)) {
    return text::join(norm_seq(std::get<std::vector<std::string>>(a)), " -> ");
  }
  if (std::holds_alternative<double>(a)) {
    const double v = std::get<double>(a);
    if (v == static_cast<long long>(v)) return std::to_string(static_cast<long long>(v));
    return std::to_string(v);
  }
  return text::join(std::vector<std::string>(std::get<std::set<std::string>>(a).begin(),
                                             std::get<std::set<std::string>>(a).end()),
                    ", ");
}

} // namespace rewards_detail

// Graded correctness S in [0, 1]. A caller holding no parsed answer scores 0
// by contract; this function requires an actual value.
inline double score(const Answer& predicted, const GroundTruth& truth, ScoringMethod method) {
  const AnswerKind truth_kind = kind_of(truth.value);
  if (!scoring_compatible(method, truth_kind)) {
    throw Error(Errc::method_kind_mismatch, std::string(to_string(method)) +
                                                " cannot score answer kind " +
                                                to_string(truth_kind));
  }
  if (predicted.index() != truth.value.index()) return 0.0;

  switch (method) {
    case ScoringMethod::accuracy: {
      if (truth_kind == AnswerKind::sequence) {
        const auto pred = rewards_detail::norm_seq(std::get<std::vector<std::string>>(predicted));
        const auto want = rewards_detail::norm_seq(std::get<std::vector<std::string>>(truth.value));
        const std::size_t longest = std::max(pred.size(), want.size());
        if (longest == 0) return 1.0;
        std::size_t hits = 0;
        for (std::size_t i = 0; i < std::min(pred.size(), want.size()); ++i) {
          if (pred[i] == want[i]) ++hits;
        }
        return static_cast<double>(hits) / static_cast<double>(longest);
      }
      return answers_equal(predicted, truth.value) ? 1.0 : 0.0;
    }
    case ScoringMethod::f1: {
      const auto pred = rewards_detail::norm_set(std::get<std::set<std::string>>(predicted));
      const auto want = rewards_detail::norm_set(std::get<std::set<std::string>>(truth.value));
      if (pred.empty() && want.empty()) return 1.0;
      if (pred.empty() || want.empty()) return 0.0;
      std::size_t inter = 0;
      for (const auto& e : pred) inter += want.count(e);
      if (inter == 0) return 0.0;
      const double precision = static_cast<double>(inter) / static_cast<double>(pred.size());
      const double recall = static_cast<double>(inter) / static_cast<double>(want.size());
      return 2.0 * precision * recall / (precision + recall);
    }
    case ScoringMethod::similarity: {
      const std::string pred = rewards_detail::as_string(predicted);
      const std::string want = rewards_detail::as_string(truth.value);
      if (pred.empty() && want.empty()) return 1.0;
      const std::size_t dist = text::edit_distance(pred, want);
      const std::size_t longest =
          std::max(text::utf8_decode(pred).size(), text::utf8_decode(want).size());
      if (longest == 0) return 1.0;
      return 1.0 - static_cast<double>(dist) / static_cast<double>(longest);
    }
    case ScoringMethod::abs_diff_rate: {
      const double pred = std::get<double>(predicted);
      const double want = std::get<double>(truth.value);
      const double denom = std::max(std::fabs(want), 1.0);
      return std::max(0.0, 1.0 - std::fabs(pred - want) / denom);
    }
  }
  return 0.0;
}

// Binary keeps {0,1}; graded passes S through; bipolar pays 1.0 only for a
// perfect answer and S-1 otherwise, putting a full reward cliff between
// perfect and near-perfect.
inline double map_reward(double s, RewardScheme scheme) {
  if (s < 0.0 || s > 1.0) {
    throw Error(Errc::s_out_of_range, "S=" + std::to_string(s) + " outside [0,1]");
  }
  switch (scheme) {
    case RewardScheme::binary: return s == 1.0 ? 1.0 : 0.0;
    case RewardScheme::graded: return s;
    case RewardScheme::bipolar: return s == 1.0 ? 1.0 : s - 1.0;
  }
  return 0.0;
}

inline constexpr double kDefaultFormatBonus = 0.1;

struct RewardValue {
  double s = 0.0;
  RewardScheme scheme = RewardScheme::binary;
  double mapped = 0.0;
  double bonus = 0.0;
  double total = 0.0;
};

inline RewardValue total_reward(double s, RewardScheme scheme, bool format_ok,
                                double bonus = kDefaultFormatBonus) {
  RewardValue r;
  r.s = s;
  r.scheme = scheme;
  r.mapped = map_reward(s, scheme);
  r.bonus = format_ok ? bonus : 0.0;
  r.total = r.mapped + r.bonus;
  return r;
}

} // namespace logicforge
