#include "memorais/ics.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <optional>
#include <stdexcept>

namespace memorais {

namespace chr = std::chrono;

namespace {

constexpr std::size_t kMaxLineOctets = 75;
constexpr std::string_view kCrlf = "\r\n";
constexpr std::string_view kDefaultSummary = "medication reminder";

int digits(std::string_view s, std::size_t pos, std::size_t len) {
  if (pos + len > s.size()) throw std::invalid_argument("truncated timestamp");
  int v = 0;
  auto sub = s.substr(pos, len);
  auto [ptr, ec] = std::from_chars(sub.data(), sub.data() + len, v);
  if (ec != std::errc() || ptr != sub.data() + len)
    throw std::invalid_argument("expected digits in timestamp '" + std::string(s) + "'");
  return v;
}

std::string format_utc(UtcTimestamp t) {
  auto day = chr::floor<chr::days>(t);
  chr::year_month_day ymd{day};
  chr::hh_mm_ss hms{t - day};
  char buf[24];
  std::snprintf(buf, sizeof buf, "%04d%02u%02uT%02d%02d%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::string format_floating(LocalDateTime t) {
  auto day = chr::floor<chr::days>(t);
  chr::year_month_day ymd{chr::sys_days{day.time_since_epoch()}};
  auto mins = (t - day).count();
  char buf[24];
  std::snprintf(buf, sizeof buf, "%04d%02u%02uT%02d%02d00", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(mins / 60), static_cast<int>(mins % 60));
  return buf;
}

bool is_utf8_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

}  // namespace

UtcTimestamp parse_utc_timestamp(std::string_view s) {
  // YYYY-MM-DDTHH:MM:SS[Z]
  if (s.size() < 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
      s[13] != ':' || s[16] != ':' || (s.size() > 19 && s.substr(19) != "Z"))
    throw std::invalid_argument("expected YYYY-MM-DDTHH:MM:SSZ, got '" + std::string(s) + "'");
  chr::year_month_day ymd{chr::year{digits(s, 0, 4)},
                          chr::month{static_cast<unsigned>(digits(s, 5, 2))},
                          chr::day{static_cast<unsigned>(digits(s, 8, 2))}};
  int hh = digits(s, 11, 2), mm = digits(s, 14, 2), ss = digits(s, 17, 2);
  if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60)
    throw std::invalid_argument("timestamp out of range: '" + std::string(s) + "'");
  return chr::sys_days{ymd} + chr::hours{hh} + chr::minutes{mm} + chr::seconds{ss};
}

std::string escape_text(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    const char c = value[i];
    switch (c) {
      case '\\': out += "\\\\"; break;
      case ';': out += "\\;"; break;
      case ',': out += "\\,"; break;
      case '\n': out += "\\n"; break;
      case '\r':
        out += "\\n";
        if (i + 1 < value.size() && value[i + 1] == '\n') ++i;
        break;
      default:
        // TEXT admits no control characters other than HTAB.
        if (static_cast<unsigned char>(c) < 0x20 && c != '\t') break;
        if (c == 0x7f) break;
        out.push_back(c);
    }
  }
  return out;
}

std::string fold_line(std::string_view line) {
  std::string out;
  out.reserve(line.size() + line.size() / 70 * 3 + 2);
  std::size_t pos = 0;
  bool first = true;
  do {
    // Continuation lines spend one octet on the leading space.
    std::size_t budget = first ? kMaxLineOctets : kMaxLineOctets - 1;
    std::size_t take = std::min(budget, line.size() - pos);
    if (pos + take < line.size()) {
      while (take > 0 && is_utf8_continuation(static_cast<unsigned char>(line[pos + take])))
        --take;
      if (take == 0) take = std::min(budget, line.size() - pos);
    }
    if (!first) out.push_back(' ');
    out.append(line.substr(pos, take));
    out.append(kCrlf);
    pos += take;
    first = false;
  } while (pos < line.size());
  return out;
}

std::vector<std::string> unfold(std::string_view bytes) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    std::size_t eol = bytes.find(kCrlf, pos);
    std::string_view phys =
        bytes.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    if (!phys.empty() && (phys.front() == ' ' || phys.front() == '\t') && !lines.empty())
      lines.back().append(phys.substr(1));
    else
      lines.emplace_back(phys);
    if (eol == std::string_view::npos) break;
    pos = eol + kCrlf.size();
  }
  return lines;
}

IcsDocument emit_ics(const SchedulePlan& plan, const CalendarMeta& meta) {
  validate_plan(plan);
  IcsDocument doc;
  std::string& out = doc.bytes;
  auto line = [&out](std::string_view s) { out += fold_line(s); };

  const std::string dtstamp = format_utc(meta.dtstamp);
  line("BEGIN:VCALENDAR");
  line("VERSION:2.0");
  line("PRODID:" + escape_text(meta.product_id));
  line("CALSCALE:GREGORIAN");
  line("METHOD:PUBLISH");
  for (const EventSeries& s : plan.series) {
    std::string summary = !meta.summary.empty()   ? meta.summary
                          : !s.summary.empty()    ? s.summary
                                                  : std::string(kDefaultSummary);
    std::string uid = plan.uid_seed + "-" + std::to_string(s.series_index) + "@memorais";
    std::string rrule = s.cadence == Cadence::daily ? "FREQ=DAILY" : "FREQ=HOURLY";
    if (s.interval != 1) rrule += ";INTERVAL=" + std::to_string(s.interval);
    rrule += ";COUNT=" + std::to_string(s.count);

    line("BEGIN:VEVENT");
    line("UID:" + uid);
    line("DTSTAMP:" + dtstamp);
    line("DTSTART:" + format_floating(s.first_occurrence));
    line("SUMMARY:" + escape_text(summary));
    line("RRULE:" + rrule);
    line("BEGIN:VALARM");
    line("ACTION:DISPLAY");
    line("DESCRIPTION:" + escape_text(summary));
    line("TRIGGER:PT0S");
    line("END:VALARM");
    line("END:VEVENT");
    doc.uid_list.push_back(std::move(uid));
  }
  line("END:VCALENDAR");
  return doc;
}

// --- re-parser -------------------------------------------------------------------

namespace {

// Plain civil calendar walk, kept apart from <chrono> arithmetic.
struct Civil {
  int year, month, day, hour, minute;
};

bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int month_length(int y, int m) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && leap(y) ? 29 : kDays[m - 1];
}

void next_day(Civil& c) {
  if (++c.day > month_length(c.year, c.month)) {
    c.day = 1;
    if (++c.month > 12) {
      c.month = 1;
      ++c.year;
    }
  }
}

void add_hours(Civil& c, long long h) {
  long long total = c.hour + h;
  c.hour = static_cast<int>(total % 24);
  for (long long d = total / 24; d > 0; --d) next_day(c);
}

LocalDateTime to_local(const Civil& c) {
  chr::year_month_day ymd{chr::year{c.year}, chr::month{static_cast<unsigned>(c.month)},
                          chr::day{static_cast<unsigned>(c.day)}};
  return chr::local_days{ymd} + chr::hours{c.hour} + chr::minutes{c.minute};
}

Civil parse_floating(std::string_view v) {
  if (v.size() != 15 || v[8] != 'T') throw IcsParseError("bad DTSTART '" + std::string(v) + "'");
  try {
    Civil c{digits(v, 0, 4), digits(v, 4, 2), digits(v, 6, 2), digits(v, 9, 2),
            digits(v, 11, 2)};
    if (c.month < 1 || c.month > 12 || c.day < 1 || c.day > month_length(c.year, c.month) ||
        c.hour > 23 || c.minute > 59 || digits(v, 13, 2) != 0)
      throw IcsParseError("DTSTART out of range '" + std::string(v) + "'");
    return c;
  } catch (const std::invalid_argument& e) {
    throw IcsParseError(e.what());
  }
}

struct Event {
  std::optional<Civil> start;
  std::map<std::string, std::string> rrule;
  std::map<std::string, std::string> props;
  int alarms = 0;
};

long long rrule_int(const Event& e, const std::string& key, long long fallback) {
  auto it = e.rrule.find(key);
  if (it == e.rrule.end()) return fallback;
  long long v = 0;
  auto [ptr, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
  if (ec != std::errc() || ptr != it->second.data() + it->second.size() || v < 1)
    throw IcsParseError("bad RRULE " + key + "=" + it->second);
  return v;
}

void expand(const Event& e, std::vector<LocalDateTime>& out) {
  for (const char* required : {"UID", "DTSTAMP", "SUMMARY"})
    if (!e.props.contains(required))
      throw IcsParseError(std::string("VEVENT without ") + required);
  if (!e.start) throw IcsParseError("VEVENT without DTSTART");
  if (e.rrule.empty()) throw IcsParseError("VEVENT without RRULE");
  if (e.alarms != 1) throw IcsParseError("VEVENT must carry exactly one VALARM");
  for (const auto& [key, _] : e.rrule)
    if (key != "FREQ" && key != "INTERVAL" && key != "COUNT")
      throw IcsParseError("unsupported RRULE part " + key);

  auto freq = e.rrule.find("FREQ");
  if (freq == e.rrule.end()) throw IcsParseError("RRULE without FREQ");
  if (!e.rrule.contains("COUNT")) throw IcsParseError("RRULE without COUNT");
  const long long interval = rrule_int(e, "INTERVAL", 1);
  const long long count = rrule_int(e, "COUNT", 1);

  Civil c = *e.start;
  for (long long i = 0; i < count; ++i) {
    out.push_back(to_local(c));
    if (freq->second == "DAILY") {
      for (long long d = 0; d < interval; ++d) next_day(c);
    } else if (freq->second == "HOURLY") {
      add_hours(c, interval);
    } else {
      throw IcsParseError("unsupported FREQ " + freq->second);
    }
  }
}

}  // namespace

std::vector<LocalDateTime> parse_ics_roundtrip(std::string_view bytes) {
  if (bytes.size() < 2 || bytes.substr(bytes.size() - 2) != kCrlf)
    throw IcsParseError("document does not end with CRLF");
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if (bytes[i] == '\n' && (i == 0 || bytes[i - 1] != '\r'))
      throw IcsParseError("bare LF at offset " + std::to_string(i));
  }

  std::vector<std::string> lines = unfold(bytes.substr(0, bytes.size() - 2));
  if (lines.empty() || lines.front() != "BEGIN:VCALENDAR" || lines.back() != "END:VCALENDAR")
    throw IcsParseError("document is not a single VCALENDAR");

  std::vector<LocalDateTime> out;
  std::vector<std::string> stack;
  std::optional<Event> event;
  bool version = false;
  for (const std::string& l : lines) {
    auto colon = l.find(':');
    if (colon == std::string::npos) throw IcsParseError("content line without ':' : " + l);
    std::string name = l.substr(0, colon);
    std::string value = l.substr(colon + 1);
    if (name.find(';') != std::string::npos) name.resize(name.find(';'));

    if (name == "BEGIN") {
      stack.push_back(value);
      if (value == "VEVENT") {
        if (event) throw IcsParseError("nested VEVENT");
        event.emplace();
      } else if (value == "VALARM") {
        if (!event) throw IcsParseError("VALARM outside VEVENT");
        ++event->alarms;
      }
      continue;
    }
    if (name == "END") {
      if (stack.empty() || stack.back() != value) throw IcsParseError("unbalanced END:" + value);
      stack.pop_back();
      if (value == "VEVENT") {
        expand(*event, out);
        event.reset();
      }
      continue;
    }
    if (stack.size() == 1 && name == "VERSION") version = value == "2.0";
    if (!event || stack.back() != "VEVENT") continue;

    event->props[name] = value;
    if (name == "DTSTART") {
      event->start = parse_floating(value);
    } else if (name == "RRULE") {
      std::size_t p = 0;
      while (p <= value.size()) {
        std::size_t semi = value.find(';', p);
        std::string part = value.substr(p, semi == std::string::npos ? std::string::npos : semi - p);
        auto eq = part.find('=');
        if (eq == std::string::npos) throw IcsParseError("bad RRULE part '" + part + "'");
        event->rrule[part.substr(0, eq)] = part.substr(eq + 1);
        if (semi == std::string::npos) break;
        p = semi + 1;
      }
    }
  }
  if (!stack.empty()) throw IcsParseError("unterminated component");
  if (!version) throw IcsParseError("missing VERSION:2.0");
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace memorais
