#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace sequd {

enum class Direction { minimize, maximize };

inline Direction parse_direction(const std::string& s) {
    if (s == "minimize" || s == "min") return Direction::minimize;
    if (s == "maximize" || s == "max") return Direction::maximize;
    throw std::invalid_argument("direction must be \"minimize\" or \"maximize\", got \"" + s + "\"");
}

inline const char* to_string(Direction d) { return d == Direction::minimize ? "minimize" : "maximize"; }

/// Larger-is-better score of a raw objective value.
constexpr double to_score(double value, Direction d) noexcept {
    return d == Direction::maximize ? value : -value;
}

/// Worst possible raw value under `d`; recorded for failed trials.
constexpr double worst_value(Direction d) noexcept {
    return d == Direction::maximize ? -std::numeric_limits<double>::infinity()
                                    : std::numeric_limits<double>::infinity();
}

}  // namespace sequd
