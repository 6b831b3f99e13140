#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "memorais/interpreter.hpp"

namespace memorais {

using LocalDate = std::chrono::year_month_day;
/// Floating wall-clock time with minute resolution (no time zone).
using LocalDateTime = std::chrono::local_time<std::chrono::minutes>;

class ClockTime {
 public:
  constexpr ClockTime() = default;
  /// Throws std::invalid_argument outside 00:00..23:59.
  ClockTime(int hour, int minute);

  int hour() const { return hour_; }
  int minute() const { return minute_; }
  int minutes_since_midnight() const { return hour_ * 60 + minute_; }

  /// Parses "HH:MM".
  static ClockTime parse(std::string_view s);
  std::string to_string() const;

  friend auto operator<=>(const ClockTime&, const ClockTime&) = default;

 private:
  int hour_ = 0;
  int minute_ = 0;
};

/// Parses YYYY-MM-DD; throws std::invalid_argument on anything else.
LocalDate parse_date(std::string_view s);
std::string format_date(const LocalDate& d);
/// "YYYY-MM-DDTHH:MM"
std::string format_datetime(const LocalDateTime& t);
LocalDateTime at_time(const LocalDate& d, const ClockTime& t);

struct TimeDefaults {
  std::map<TimeOfDay, ClockTime> time_of_day{
      {TimeOfDay::morning, ClockTime(8, 0)},
      {TimeOfDay::midday, ClockTime(12, 0)},
      {TimeOfDay::afternoon, ClockTime(16, 0)},
      {TimeOfDay::evening, ClockTime(20, 0)},
  };
  ClockTime waking_start{8, 0};
  ClockTime waking_end{20, 0};
  int default_horizon_days = 30;
  int max_daily_intakes = 12;
};

/// Reads a time-defaults document; absent keys keep their defaults.
/// Throws MalformedInput on invalid values.
TimeDefaults load_time_defaults(std::string_view raw);

enum class Cadence { daily, hourly };

struct EventSeries {
  int series_index = 0;
  LocalDateTime first_occurrence{};
  Cadence cadence = Cadence::daily;
  /// Days between occurrences for daily cadence, hours for hourly.
  std::int64_t interval = 1;
  std::int64_t count = 1;
  std::string summary;

  friend bool operator==(const EventSeries&, const EventSeries&) = default;
};

struct SchedulePlan {
  std::vector<EventSeries> series;
  std::string uid_seed;
  LocalDate anchor_date{};

  friend bool operator==(const SchedulePlan&, const SchedulePlan&) = default;
};

/// Hex FNV-1a digest of label text and anchor date.
std::string make_uid_seed(std::string_view label_text, const LocalDate& anchor);

/// Wall-clock intake times for one day of the regimen. Throws ScheduleError
/// when the frequency cannot be laid out on a daily clock.
std::vector<ClockTime> resolve_times(const ScheduleParameters& params,
                                     const TimeDefaults& cfg = {});

/// Number of days the reminders cover starting at `anchor`.
std::int64_t horizon_days(const ScheduleParameters& params, const LocalDate& anchor,
                          const TimeDefaults& cfg = {});

SchedulePlan build_schedule(const ScheduleParameters& params, const LocalDate& anchor,
                            const TimeDefaults& cfg = {});

/// All occurrence timestamps of the plan, ascending.
std::vector<LocalDateTime> expand_occurrences(const SchedulePlan& plan);

/// Throws EmitError when the plan violates its structural invariants.
void validate_plan(const SchedulePlan& plan);

}  // namespace memorais
