#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace forumnet {

using Timestamp = std::chrono::sys_seconds;

/// Parses ISO-8601 `YYYY-MM-DD[(T| )HH:MM[:SS[.fff]]][Z|±HH[:]MM]`.
/// Missing offsets are read as UTC; fractional seconds are truncated.
std::optional<Timestamp> parse_iso8601(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_iso8601(Timestamp t);

enum class Period { year, quarter, month };

/// UTC calendar period label: `2011`, `2011-Q2`, or `2011-04`.
std::string period_label(Timestamp t, Period p);

std::optional<Period> parse_period(std::string_view name);

} // namespace forumnet
