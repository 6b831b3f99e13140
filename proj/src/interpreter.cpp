#include "memorais/interpreter.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "json.hpp"

namespace memorais {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Catalog numbers beyond this are treated as OCR noise rather than dosing.
constexpr std::int64_t kMaxCapturedNumber = 100000;

std::optional<std::int64_t> parse_count(const std::ssub_match& m) {
  if (!m.matched) return std::nullopt;
  std::string_view s(&*m.first, static_cast<std::size_t>(m.length()));
  if (s.empty()) return std::nullopt;
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  if (value <= 0 || value > kMaxCapturedNumber) return std::nullopt;
  return value;
}

void add_time_of_day(std::vector<TimeOfDay>& times, TimeOfDay t) {
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end() || *it != t) times.insert(it, t);
}

}  // namespace

std::vector<RuleApplication> apply_rules(std::string_view text, const Ruleset& rs) {
  std::vector<RuleApplication> out;
  const std::string subject(text);
  for (const Rule& rule : rs.rules) {
    for (std::sregex_iterator it(subject.begin(), subject.end(), *rule.regex), end;
         it != end; ++it) {
      const std::smatch& m = *it;
      if (m.length(0) == 0) continue;
      RuleApplication app;
      app.rule = &rule;
      app.start = static_cast<std::size_t>(m.position(0));
      app.end = app.start + static_cast<std::size_t>(m.length(0));

      if (rule.kind == RuleKind::frequency_indicator) {
        Rational f = *rule.frequency;
        if (rule.capture != CaptureRole::none) {
          auto n = parse_count(m[1]);
          if (!n) continue;
          f = rule.capture == CaptureRole::count ? f * Rational(*n) : f / Rational(*n);
        }
        app.frequency = f;
      } else {
        auto n = parse_count(m[1]);
        if (!n) continue;
        app.duration = n;
      }
      out.push_back(app);
    }
  }
  return out;
}

ScheduleParameters interpret(std::string_view normalized_text, const Ruleset& rs) {
  ScheduleParameters params;
  params.label_text = std::string(normalized_text);
  bool frequency_set = false;

  for (const RuleApplication& app : apply_rules(normalized_text, rs)) {
    const Rule& rule = *app.rule;
    params.matches.push_back(RuleMatch{rule.id, app.start, app.end});
    if (rule.kind == RuleKind::frequency_indicator) {
      params.frequency = *app.frequency;
      params.frequency_unit = *rule.frequency_unit;
      for (TimeOfDay t : rule.time_of_days) add_time_of_day(params.time_of_days, t);
      frequency_set = true;
    } else {
      params.duration = app.duration;
      params.duration_unit = rule.duration_unit;
    }
  }

  if (!frequency_set)
    throw InterpretationFailure(params.label_text, std::move(params.matches));
  return params;
}

ScheduleParameters interpret(const LabelText& label, const Ruleset& rs) {
  return interpret(std::string_view(label.text), rs);
}

// --- serialization -------------------------------------------------------------

std::string to_json(const ScheduleParameters& p, int indent) {
  ordered_json j;
  j["frequency"] = {{"num", p.frequency.num()}, {"den", p.frequency.den()}};
  j["frequency_unit"] = to_string(p.frequency_unit);
  j["duration"] = p.duration ? ordered_json(*p.duration) : ordered_json(nullptr);
  j["duration_unit"] =
      p.duration_unit ? ordered_json(to_string(*p.duration_unit)) : ordered_json(nullptr);
  ordered_json times = ordered_json::array();
  for (TimeOfDay t : p.time_of_days) times.push_back(to_string(t));
  j["time_of_days"] = times;
  ordered_json matches = ordered_json::array();
  for (const RuleMatch& m : p.matches)
    matches.push_back({{"rule_id", m.rule_id}, {"start", m.start}, {"end", m.end}});
  j["matches"] = matches;
  j["label_text"] = p.label_text;
  return j.dump(indent);
}

ScheduleParameters schedule_parameters_from_json(std::string_view raw) {
  json j;
  try {
    j = json::parse(raw.begin(), raw.end());
  } catch (const json::parse_error& e) {
    throw MalformedInput(std::string("syntax error: ") + e.what());
  }
  if (!j.is_object()) throw MalformedInput("schedule parameters must be an object");

  ScheduleParameters p;
  try {
    const json& f = j.at("frequency");
    p.frequency = Rational(f.at("num").get<std::int64_t>(), f.at("den").get<std::int64_t>());

    auto unit = parse_time_unit(j.at("frequency_unit").get<std::string>());
    if (!unit) throw MalformedInput("unknown frequency_unit");
    p.frequency_unit = *unit;

    if (j.contains("duration") && !j["duration"].is_null()) {
      auto d = j["duration"].get<std::int64_t>();
      if (d <= 0) throw MalformedInput("duration must be positive");
      p.duration = d;
    }
    if (j.contains("duration_unit") && !j["duration_unit"].is_null()) {
      auto du = parse_time_unit(j["duration_unit"].get<std::string>());
      if (!du || *du == TimeUnit::hours) throw MalformedInput("unknown duration_unit");
      p.duration_unit = du;
    }
    if (p.duration.has_value() != p.duration_unit.has_value())
      throw MalformedInput("duration and duration_unit must be given together");

    if (j.contains("time_of_days")) {
      for (const auto& t : j["time_of_days"]) {
        auto tod = parse_time_of_day(t.get<std::string>());
        if (!tod) throw MalformedInput("unknown time of day " + t.dump());
        add_time_of_day(p.time_of_days, *tod);
      }
    }
    if (j.contains("matches")) {
      for (const auto& m : j["matches"])
        p.matches.push_back(RuleMatch{m.at("rule_id").get<std::string>(),
                                      m.at("start").get<std::size_t>(),
                                      m.at("end").get<std::size_t>()});
    }
    if (j.contains("label_text")) p.label_text = j["label_text"].get<std::string>();
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("schedule parameters: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw MalformedInput(std::string("schedule parameters: ") + e.what());
  }
  return p;
}

}  // namespace memorais
