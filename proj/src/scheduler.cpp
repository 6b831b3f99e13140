#include "memorais/scheduler.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace memorais {

namespace chr = std::chrono;

namespace {

// Ten years; longer regimens are almost certainly misreads.
constexpr std::int64_t kMaxHorizonDays = 3660;

int parse_fixed(std::string_view s, std::size_t pos, std::size_t len) {
  int v = 0;
  auto sub = s.substr(pos, len);
  auto [ptr, ec] = std::from_chars(sub.data(), sub.data() + sub.size(), v);
  if (ec != std::errc() || ptr != sub.data() + sub.size())
    throw std::invalid_argument("expected digits in '" + std::string(s) + "'");
  return v;
}

}  // namespace

ClockTime::ClockTime(int hour, int minute) : hour_(hour), minute_(minute) {
  if (hour < 0 || hour > 23 || minute < 0 || minute > 59)
    throw std::invalid_argument("clock time out of range");
}

ClockTime ClockTime::parse(std::string_view s) {
  if (s.size() != 5 || s[2] != ':')
    throw std::invalid_argument("expected HH:MM, got '" + std::string(s) + "'");
  return ClockTime(parse_fixed(s, 0, 2), parse_fixed(s, 3, 2));
}

std::string ClockTime::to_string() const {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d:%02d", hour_, minute_);
  return buf;
}

LocalDate parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-')
    throw std::invalid_argument("expected YYYY-MM-DD, got '" + std::string(s) + "'");
  LocalDate d{chr::year{parse_fixed(s, 0, 4)},
              chr::month{static_cast<unsigned>(parse_fixed(s, 5, 2))},
              chr::day{static_cast<unsigned>(parse_fixed(s, 8, 2))}};
  if (!d.ok()) throw std::invalid_argument("invalid calendar date '" + std::string(s) + "'");
  return d;
}

std::string format_date(const LocalDate& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

std::string format_datetime(const LocalDateTime& t) {
  auto day = chr::floor<chr::days>(t);
  auto mins = (t - day).count();
  char buf[8];
  std::snprintf(buf, sizeof buf, "T%02d:%02d", static_cast<int>(mins / 60),
                static_cast<int>(mins % 60));
  return format_date(LocalDate{day}) + buf;
}

LocalDateTime at_time(const LocalDate& d, const ClockTime& t) {
  return chr::local_days{d} + chr::minutes{t.minutes_since_midnight()};
}

TimeDefaults load_time_defaults(std::string_view raw) {
  using nlohmann::json;
  TimeDefaults cfg;
  try {
    json j = json::parse(raw.begin(), raw.end());
    if (!j.is_object()) throw MalformedInput("time defaults must be an object");
    for (const auto& [key, _] : j.items())
      if (key != "time_of_day" && key != "waking_window" &&
          key != "default_horizon_days" && key != "max_daily_intakes")
        throw MalformedInput("unknown time-defaults field '" + key + "'");
    if (j.contains("time_of_day")) {
      for (const auto& [name, value] : j["time_of_day"].items()) {
        auto tod = parse_time_of_day(name);
        if (!tod) throw MalformedInput("unknown time of day '" + name + "'");
        cfg.time_of_day[*tod] = ClockTime::parse(value.get<std::string>());
      }
    }
    if (j.contains("waking_window")) {
      const json& w = j["waking_window"];
      cfg.waking_start = ClockTime::parse(w.at("start").get<std::string>());
      cfg.waking_end = ClockTime::parse(w.at("end").get<std::string>());
    }
    if (j.contains("default_horizon_days"))
      cfg.default_horizon_days = j["default_horizon_days"].get<int>();
    if (j.contains("max_daily_intakes"))
      cfg.max_daily_intakes = j["max_daily_intakes"].get<int>();
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("time defaults: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw MalformedInput(std::string("time defaults: ") + e.what());
  }
  if (cfg.waking_end < cfg.waking_start)
    throw MalformedInput("time defaults: waking window ends before it starts");
  if (cfg.default_horizon_days <= 0 || cfg.default_horizon_days > kMaxHorizonDays)
    throw MalformedInput("time defaults: default_horizon_days out of range");
  if (cfg.max_daily_intakes <= 0)
    throw MalformedInput("time defaults: max_daily_intakes must be positive");
  return cfg;
}

std::string make_uid_seed(std::string_view label_text, const LocalDate& anchor) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  mix(label_text);
  mix("|");
  mix(format_date(anchor));
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

/// How the regimen repeats: either some number of intakes on every
/// `interval`-th day, or one intake every `interval` hours.
struct Regimen {
  Cadence cadence = Cadence::daily;
  std::int64_t interval = 1;
  std::int64_t intakes_per_day = 1;
};

Regimen classify(const ScheduleParameters& p, const TimeDefaults& cfg) {
  Regimen r;
  if (p.frequency_unit == TimeUnit::hours) {
    // p/q intakes per hour: one intake every q/p hours.
    if (p.frequency.num() != 1)
      throw ScheduleError("frequency " + p.frequency.to_string() +
                          " per hour is not a whole-hour interval");
    r.cadence = Cadence::hourly;
    r.interval = p.frequency.den();
    r.intakes_per_day = (24 + r.interval - 1) / r.interval;
  } else {
    Rational per_day = p.frequency;
    if (p.frequency_unit == TimeUnit::weeks) {
      per_day = p.frequency / Rational(7);
    } else if (p.frequency_unit == TimeUnit::months) {
      throw ScheduleError("monthly regimens are not supported");
    }
    if (per_day <= Rational(1)) {
      if (per_day.num() != 1)
        throw ScheduleError("frequency " + p.frequency.to_string() + " per " +
                            std::string(to_string(p.frequency_unit)) +
                            " does not reduce to a whole-day interval");
      r.interval = per_day.den();
    } else {
      if (!per_day.is_integer())
        throw ScheduleError("frequency " + per_day.to_string() +
                            " per day is not a whole number of daily intakes");
      r.intakes_per_day = per_day.num();
    }
  }
  if (r.intakes_per_day > cfg.max_daily_intakes)
    throw ScheduleError(std::to_string(r.intakes_per_day) +
                        " intakes per day exceeds the limit of " +
                        std::to_string(cfg.max_daily_intakes));
  return r;
}

std::vector<ClockTime> mapped_times(const ScheduleParameters& p, const TimeDefaults& cfg) {
  std::vector<ClockTime> times;
  for (TimeOfDay t : p.time_of_days) {
    auto it = cfg.time_of_day.find(t);
    if (it == cfg.time_of_day.end())
      throw ScheduleError("no clock time configured for " + std::string(to_string(t)));
    times.push_back(it->second);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

}  // namespace

std::vector<ClockTime> resolve_times(const ScheduleParameters& params,
                                     const TimeDefaults& cfg) {
  const Regimen r = classify(params, cfg);
  std::vector<ClockTime> times = mapped_times(params, cfg);

  if (r.cadence == Cadence::hourly) {
    // Hourly regimens run around the clock from one start time.
    return {times.empty() ? cfg.waking_start : times.front()};
  }
  if (!times.empty()) return times;

  const int start = cfg.waking_start.minutes_since_midnight();
  const int span = cfg.waking_end.minutes_since_midnight() - start;
  const auto k = r.intakes_per_day;
  for (std::int64_t i = 0; i < k; ++i) {
    int offset = k == 1 ? 0 : static_cast<int>(i * span / (k - 1));
    times.emplace_back((start + offset) / 60, (start + offset) % 60);
  }
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

std::int64_t horizon_days(const ScheduleParameters& params, const LocalDate& anchor,
                          const TimeDefaults& cfg) {
  std::int64_t days = cfg.default_horizon_days;
  if (params.duration) {
    const std::int64_t n = *params.duration;
    switch (*params.duration_unit) {
      case TimeUnit::days: days = n; break;
      case TimeUnit::weeks: days = n * 7; break;
      case TimeUnit::months: {
        if (n > kMaxHorizonDays)
          throw ScheduleError("duration of " + std::to_string(n) + " months is too long");
        // Calendar months, clamping the day of month (Jan 31 + 1 month = Feb 29/28).
        auto ym = chr::year_month{anchor.year(), anchor.month()} + chr::months{n};
        chr::year_month_day end{ym.year(), ym.month(),
                                std::min(anchor.day(), (ym / chr::last).day())};
        days = (chr::sys_days{end} - chr::sys_days{anchor}).count();
        break;
      }
      case TimeUnit::hours:
        throw ScheduleError("duration in hours is not supported");
    }
  }
  if (days <= 0) throw ScheduleError("empty duration");
  if (days > kMaxHorizonDays)
    throw ScheduleError("duration of " + std::to_string(days) + " days is too long");
  return days;
}

SchedulePlan build_schedule(const ScheduleParameters& params, const LocalDate& anchor,
                            const TimeDefaults& cfg) {
  if (!anchor.ok()) throw ScheduleError("invalid anchor date");
  const Regimen r = classify(params, cfg);
  const std::vector<ClockTime> times = resolve_times(params, cfg);
  const std::int64_t horizon = horizon_days(params, anchor, cfg);

  SchedulePlan plan;
  plan.anchor_date = anchor;
  plan.uid_seed = make_uid_seed(params.label_text, anchor);

  const std::int64_t units = r.cadence == Cadence::hourly ? horizon * 24 : horizon;
  const std::int64_t count = (units + r.interval - 1) / r.interval;
  for (std::size_t i = 0; i < times.size(); ++i) {
    EventSeries s;
    s.series_index = static_cast<int>(i);
    s.first_occurrence = at_time(anchor, times[i]);
    s.cadence = r.cadence;
    s.interval = r.interval;
    s.count = count;
    s.summary = "medication reminder";
    plan.series.push_back(std::move(s));
  }
  return plan;
}

std::vector<LocalDateTime> expand_occurrences(const SchedulePlan& plan) {
  std::vector<LocalDateTime> out;
  std::size_t total = 0;
  for (const auto& s : plan.series) total += static_cast<std::size_t>(s.count);
  out.reserve(total);
  for (const auto& s : plan.series) {
    const chr::minutes step = s.cadence == Cadence::daily
                                  ? chr::minutes{chr::days{s.interval}}
                                  : chr::minutes{chr::hours{s.interval}};
    for (std::int64_t i = 0; i < s.count; ++i) out.push_back(s.first_occurrence + step * i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void validate_plan(const SchedulePlan& plan) {
  if (plan.series.empty()) throw EmitError("plan has no event series");
  if (plan.uid_seed.empty()) throw EmitError("plan has no uid seed");
  for (std::size_t i = 0; i < plan.series.size(); ++i) {
    const auto& s = plan.series[i];
    if (s.series_index != static_cast<int>(i))
      throw EmitError("series indices must be 0..n-1 in order");
    if (s.count < 1) throw EmitError("series count must be positive");
    if (s.interval < 1) throw EmitError("series interval must be positive");
  }
}

}  // namespace memorais
