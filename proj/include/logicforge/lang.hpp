#pragma once

#include <string>
#include <string_view>

#include "logicforge/errors.hpp"

namespace logicforge {

enum class Language { en, zh };

inline const char* to_string(Language l) { return l == Language::en ? "en" : "zh"; }

inline Language language_from_string(std::string_view s) {
  if (s == "en") return Language::en;
  if (s == "zh") return Language::zh;
  throw Error(Errc::unsupported_language, "unknown language '" + std::string(s) + "'");
}

} // namespace logicforge
