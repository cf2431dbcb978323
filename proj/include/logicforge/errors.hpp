#pragma once

#include <stdexcept>
#include <string>

namespace logicforge {

enum class Errc {
  unknown_family,
  unsupported_language,
  uniqueness_exhausted,
  no_solution,
  multiple_solutions,
  too_large,
  arity_mismatch,
  language_mismatch,
  residual_marker,
  no_template_for_language,
  anchor_inversion,
  non_monotone_response,
  probe_inconclusive,
  method_kind_mismatch,
  s_out_of_range,
  empty_group,
  diverged_policy,
  duplicate_id,
  malformed_line,
  auth_missing,
  config_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::unknown_family: return "unknown_family";
    case Errc::unsupported_language: return "unsupported_language";
    case Errc::uniqueness_exhausted: return "uniqueness_exhausted";
    case Errc::no_solution: return "no_solution";
    case Errc::multiple_solutions: return "multiple_solutions";
    case Errc::too_large: return "too_large";
    case Errc::arity_mismatch: return "arity_mismatch";
    case Errc::language_mismatch: return "language_mismatch";
    case Errc::residual_marker: return "residual_marker";
    case Errc::no_template_for_language: return "no_template_for_language";
    case Errc::anchor_inversion: return "anchor_inversion";
    case Errc::non_monotone_response: return "non_monotone_response";
    case Errc::probe_inconclusive: return "probe_inconclusive";
    case Errc::method_kind_mismatch: return "method_kind_mismatch";
    case Errc::s_out_of_range: return "s_out_of_range";
    case Errc::empty_group: return "empty_group";
    case Errc::diverged_policy: return "diverged_policy";
    case Errc::duplicate_id: return "duplicate_id";
    case Errc::malformed_line: return "malformed_line";
    case Errc::auth_missing: return "auth_missing";
    case Errc::config_error: return "config_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

} // namespace logicforge
