#include "memorais/rules.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "json.hpp"

#include "memorais/errors.hpp"

namespace memorais {

using nlohmann::json;
using nlohmann::ordered_json;

// --- Rational ---------------------------------------------------------------

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (num <= 0 || den <= 0)
    throw std::invalid_argument("rational must be positive: " +
                                std::to_string(num) + "/" + std::to_string(den));
  std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::operator*(const Rational& o) const {
  std::int64_t g1 = std::gcd(num_, o.den_);
  std::int64_t g2 = std::gcd(o.num_, den_);
  return Rational((num_ / g1) * (o.num_ / g2), (den_ / g2) * (o.den_ / g1));
}

Rational Rational::operator/(const Rational& o) const {
  return *this * Rational(o.den_, o.num_);
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

// --- enum names ---------------------------------------------------------------

std::string_view to_string(RuleKind k) {
  return k == RuleKind::frequency_indicator ? "frequency_indicator"
                                            : "duration_indicator";
}

std::string_view to_string(TimeUnit u) {
  switch (u) {
    case TimeUnit::hours: return "hours";
    case TimeUnit::days: return "days";
    case TimeUnit::weeks: return "weeks";
    case TimeUnit::months: return "months";
  }
  return "?";
}

std::string_view to_string(TimeOfDay t) {
  switch (t) {
    case TimeOfDay::morning: return "morning";
    case TimeOfDay::midday: return "midday";
    case TimeOfDay::afternoon: return "afternoon";
    case TimeOfDay::evening: return "evening";
  }
  return "?";
}

std::string_view to_string(CaptureRole c) {
  switch (c) {
    case CaptureRole::none: return "none";
    case CaptureRole::count: return "count";
    case CaptureRole::interval: return "interval";
  }
  return "?";
}

std::optional<RuleKind> parse_rule_kind(std::string_view s) {
  if (s == "frequency_indicator" || s == "frequency") return RuleKind::frequency_indicator;
  if (s == "duration_indicator" || s == "duration") return RuleKind::duration_indicator;
  return std::nullopt;
}

std::optional<TimeUnit> parse_time_unit(std::string_view s) {
  for (auto u : {TimeUnit::hours, TimeUnit::days, TimeUnit::weeks, TimeUnit::months})
    if (to_string(u) == s) return u;
  return std::nullopt;
}

std::optional<TimeOfDay> parse_time_of_day(std::string_view s) {
  for (auto t : {TimeOfDay::morning, TimeOfDay::midday, TimeOfDay::afternoon,
                 TimeOfDay::evening})
    if (to_string(t) == s) return t;
  return std::nullopt;
}

std::optional<CaptureRole> parse_capture_role(std::string_view s) {
  for (auto c : {CaptureRole::none, CaptureRole::count, CaptureRole::interval})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

bool operator==(const Rule& a, const Rule& b) {
  return a.id == b.id && a.kind == b.kind && a.pattern == b.pattern &&
         a.frequency == b.frequency && a.frequency_unit == b.frequency_unit &&
         a.duration_unit == b.duration_unit && a.time_of_days == b.time_of_days &&
         a.capture == b.capture && a.note == b.note && a.priority == b.priority;
}

// --- validation ---------------------------------------------------------------

namespace {

/// Uppercase letters outside escape sequences (\D, \S, \W, \B are fine).
bool has_uppercase_literal(std::string_view pattern) {
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] == '\\') {
      ++i;
      continue;
    }
    if (pattern[i] >= 'A' && pattern[i] <= 'Z') return true;
  }
  return false;
}

void validate_rule(Rule& rule) {
  const std::string& id = rule.id;
  if (id.empty()) throw CatalogError("", "rule id must be a non-empty string");
  if (rule.pattern.empty()) throw CatalogError(id, "pattern is empty");
  if (has_uppercase_literal(rule.pattern))
    throw CatalogError(id, "pattern must be lowercase");

  try {
    rule.regex = std::make_shared<const std::regex>(
        rule.pattern, std::regex::ECMAScript | std::regex::optimize);
  } catch (const std::regex_error& e) {
    throw CatalogError(id, std::string("bad pattern: ") + e.what());
  }
  const unsigned groups = rule.regex->mark_count();

  if (rule.kind == RuleKind::frequency_indicator) {
    if (!rule.frequency) throw CatalogError(id, "frequency rule requires 'frequency'");
    if (!rule.frequency_unit)
      throw CatalogError(id, "frequency rule requires 'frequency_unit'");
    if (rule.duration_unit)
      throw CatalogError(id, "frequency rule must not set 'duration_unit'");
    if (rule.capture == CaptureRole::none && groups != 0)
      throw CatalogError(id, "capture group present but 'capture' not declared");
    if (rule.capture != CaptureRole::none && groups != 1)
      throw CatalogError(id, "'capture' requires exactly one capture group");
  } else {
    if (!rule.duration_unit)
      throw CatalogError(id, "duration rule requires 'duration_unit'");
    if (*rule.duration_unit == TimeUnit::hours)
      throw CatalogError(id, "duration_unit must be days, weeks or months");
    if (rule.frequency) throw CatalogError(id, "duration rule must not set 'frequency'");
    if (rule.frequency_unit)
      throw CatalogError(id, "duration rule must not set 'frequency_unit'");
    if (!rule.time_of_days.empty())
      throw CatalogError(id, "duration rule must not set 'time_of_days'");
    if (rule.capture != CaptureRole::none)
      throw CatalogError(id, "duration rule must not set 'capture'");
    if (groups != 1)
      throw CatalogError(id, "duration pattern needs exactly one numeric capture group");
  }
}

const std::set<std::string, std::less<>> kRuleKeys{
    "id", "kind", "pattern", "frequency", "frequency_unit", "duration_unit",
    "time_of_days", "capture", "note"};

std::string require_string(const json& obj, const char* key, const std::string& id) {
  if (!obj.contains(key)) throw CatalogError(id, std::string("missing '") + key + "'");
  if (!obj[key].is_string())
    throw CatalogError(id, std::string("'") + key + "' must be a string");
  return obj[key].get<std::string>();
}

Rule parse_rule(const json& j, std::size_t index) {
  std::string fallback = "#" + std::to_string(index);
  if (!j.is_object()) throw CatalogError(fallback, "rule must be an object");

  Rule rule;
  rule.id = require_string(j, "id", fallback);
  const std::string& id = rule.id;
  for (const auto& [key, _] : j.items())
    if (!kRuleKeys.contains(key)) throw CatalogError(id, "unknown field '" + key + "'");

  auto kind = parse_rule_kind(require_string(j, "kind", id));
  if (!kind) throw CatalogError(id, "unknown kind");
  rule.kind = *kind;
  rule.pattern = require_string(j, "pattern", id);

  if (j.contains("frequency")) {
    const json& f = j["frequency"];
    if (f.is_object()) {
      if (!f.contains("num") || !f.contains("den") || !f["num"].is_number_integer() ||
          !f["den"].is_number_integer())
        throw CatalogError(id, "frequency must be {\"num\": int, \"den\": int}");
      try {
        rule.frequency = Rational(f["num"].get<std::int64_t>(), f["den"].get<std::int64_t>());
      } catch (const std::invalid_argument& e) {
        throw CatalogError(id, e.what());
      }
    } else if (f.is_number_integer() && f.get<std::int64_t>() > 0) {
      rule.frequency = Rational(f.get<std::int64_t>());
    } else {
      throw CatalogError(id, "frequency must be a positive {num, den} fraction");
    }
  }
  if (j.contains("frequency_unit")) {
    auto u = parse_time_unit(require_string(j, "frequency_unit", id));
    if (!u) throw CatalogError(id, "unknown frequency_unit");
    rule.frequency_unit = u;
  }
  if (j.contains("duration_unit")) {
    auto u = parse_time_unit(require_string(j, "duration_unit", id));
    if (!u) throw CatalogError(id, "unknown duration_unit");
    rule.duration_unit = u;
  }
  if (j.contains("time_of_days")) {
    const json& t = j["time_of_days"];
    if (!t.is_array()) throw CatalogError(id, "time_of_days must be an array");
    for (const auto& v : t) {
      auto tod = v.is_string() ? parse_time_of_day(v.get<std::string>()) : std::nullopt;
      if (!tod) throw CatalogError(id, "unknown time of day " + v.dump());
      if (std::find(rule.time_of_days.begin(), rule.time_of_days.end(), *tod) ==
          rule.time_of_days.end())
        rule.time_of_days.push_back(*tod);
    }
  }
  if (j.contains("capture")) {
    auto c = parse_capture_role(require_string(j, "capture", id));
    if (!c) throw CatalogError(id, "capture must be 'count' or 'interval'");
    rule.capture = *c;
  }
  if (j.contains("note")) rule.note = require_string(j, "note", id);
  return rule;
}

}  // namespace

Ruleset make_ruleset(std::string version, std::vector<Rule> rules,
                     std::string description) {
  std::set<std::string, std::less<>> seen;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    Rule& r = rules[i];
    if (!r.id.empty() && !seen.insert(r.id).second)
      throw CatalogError(r.id, "duplicate id");
    validate_rule(r);
    r.priority = static_cast<int>(i);
  }
  return Ruleset{std::move(version), std::move(description), std::move(rules)};
}

Ruleset load_ruleset(std::string_view raw) {
  json root;
  try {
    root = json::parse(raw.begin(), raw.end());
  } catch (const json::parse_error& e) {
    throw CatalogError("", std::string("syntax error: ") + e.what());
  }
  if (!root.is_object()) throw CatalogError("", "catalog must be an object");
  for (const auto& [key, _] : root.items())
    if (key != "version" && key != "rules" && key != "description")
      throw CatalogError("", "unknown top-level field '" + key + "'");
  if (!root.contains("version") || !root["version"].is_string())
    throw CatalogError("", "catalog requires a string 'version'");
  if (!root.contains("rules") || !root["rules"].is_array())
    throw CatalogError("", "catalog requires a 'rules' array");
  std::string description;
  if (root.contains("description")) {
    if (!root["description"].is_string())
      throw CatalogError("", "'description' must be a string");
    description = root["description"].get<std::string>();
  }

  std::vector<Rule> rules;
  const json& arr = root["rules"];
  rules.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) rules.push_back(parse_rule(arr[i], i));
  return make_ruleset(root["version"].get<std::string>(), std::move(rules),
                      std::move(description));
}

std::string serialize_ruleset(const Ruleset& rs) {
  ordered_json root;
  root["version"] = rs.version;
  if (!rs.description.empty()) root["description"] = rs.description;
  ordered_json rules = ordered_json::array();
  for (const Rule& r : rs.rules) {
    ordered_json j;
    j["id"] = r.id;
    j["kind"] = to_string(r.kind);
    j["pattern"] = r.pattern;
    if (r.frequency) j["frequency"] = {{"num", r.frequency->num()}, {"den", r.frequency->den()}};
    if (r.frequency_unit) j["frequency_unit"] = to_string(*r.frequency_unit);
    if (r.duration_unit) j["duration_unit"] = to_string(*r.duration_unit);
    if (!r.time_of_days.empty()) {
      ordered_json t = ordered_json::array();
      for (auto tod : r.time_of_days) t.push_back(to_string(tod));
      j["time_of_days"] = t;
    }
    if (r.capture != CaptureRole::none) j["capture"] = to_string(r.capture);
    if (!r.note.empty()) j["note"] = r.note;
    rules.push_back(std::move(j));
  }
  root["rules"] = std::move(rules);
  return root.dump(2) + "\n";
}

std::size_t Ruleset::count(RuleKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      rules.begin(), rules.end(), [kind](const Rule& r) { return r.kind == kind; }));
}

const Rule* Ruleset::find(std::string_view id) const {
  for (const Rule& r : rules)
    if (r.id == id) return &r;
  return nullptr;
}

const Ruleset& default_ruleset() {
  static const Ruleset rs = load_ruleset(default_catalog_source());
  return rs;
}

}  // namespace memorais
