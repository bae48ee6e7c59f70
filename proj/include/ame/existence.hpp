#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace ame {

enum class Existence { exists, not_exists, unknown };

inline const char* to_string(Existence e) {
  switch (e) {
    case Existence::exists: return "exists";
    case Existence::not_exists: return "not-exists";
    case Existence::unknown: return "unknown";
  }
  return "unknown";
}

/// Grid marker: "E", "-" or "?".
inline std::string existence_marker(Existence e) {
  return e == Existence::exists ? "E" : e == Existence::not_exists ? "-" : "?";
}

inline std::optional<Existence> parse_existence(std::string_view s) {
  if (s == "exists") return Existence::exists;
  if (s == "not-exists") return Existence::not_exists;
  if (s == "unknown") return Existence::unknown;
  return std::nullopt;
}

}  // namespace ame
