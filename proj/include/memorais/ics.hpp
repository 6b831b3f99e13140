#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

#include "memorais/scheduler.hpp"

namespace memorais {

using UtcTimestamp = std::chrono::sys_seconds;

/// Parses "YYYY-MM-DDTHH:MM:SSZ" (the trailing Z is optional; the value is
/// always taken as UTC). Throws std::invalid_argument.
UtcTimestamp parse_utc_timestamp(std::string_view s);

struct CalendarMeta {
  std::string product_id = "-//memorais//medication reminders//EN";
  /// Event title; empty falls back to the series summary, then to
  /// "medication reminder".
  std::string summary;
  UtcTimestamp dtstamp{};
};

struct IcsDocument {
  std::string bytes;
  std::vector<std::string> uid_list;
};

/// Escapes a TEXT value: backslash, semicolon, comma and newlines.
std::string escape_text(std::string_view value);

/// Splits one logical content line into physical lines of at most 75
/// octets, each terminated by CRLF; continuations start with one space.
/// Never splits a UTF-8 sequence.
std::string fold_line(std::string_view line);

/// Joins folded physical lines back into logical lines (without CRLF).
std::vector<std::string> unfold(std::string_view bytes);

/// Serializes the plan as an RFC 5545 calendar with one VEVENT (and one
/// display alarm) per series. Throws EmitError for malformed plans.
IcsDocument emit_ics(const SchedulePlan& plan, const CalendarMeta& meta);

/// Re-reads a document produced by emit_ics and expands every event's
/// recurrence. Throws IcsParseError on anything it cannot account for.
std::vector<LocalDateTime> parse_ics_roundtrip(std::string_view bytes);
inline std::vector<LocalDateTime> parse_ics_roundtrip(const IcsDocument& doc) {
  return parse_ics_roundtrip(doc.bytes);
}

}  // namespace memorais
