#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memorais/errors.hpp"
#include "memorais/rules.hpp"
#include "memorais/textnorm.hpp"

namespace memorais {

/// The interpreter's output: how often, for how long and at which times of
/// day the medication is taken, plus the rule hits that justify each value.
struct ScheduleParameters {
  Rational frequency;  ///< intakes per frequency_unit
  TimeUnit frequency_unit = TimeUnit::days;
  std::optional<std::int64_t> duration;
  std::optional<TimeUnit> duration_unit;
  std::vector<TimeOfDay> time_of_days;  ///< sorted, unique
  std::vector<RuleMatch> matches;
  /// Normalized text the rules ran on; seeds deterministic event UIDs.
  std::string label_text;

  friend bool operator==(const ScheduleParameters&, const ScheduleParameters&) = default;
};

/// One successful application of a rule: where it matched and the value it
/// writes once any capture group has been folded in.
struct RuleApplication {
  const Rule* rule = nullptr;
  std::size_t start = 0;
  std::size_t end = 0;
  std::optional<Rational> frequency;     ///< frequency rules
  std::optional<std::int64_t> duration;  ///< duration rules
};

/// Every match of every rule against `text`, in catalog order and then in
/// text order. Matches whose captured number is not a usable positive
/// integer are skipped.
std::vector<RuleApplication> apply_rules(std::string_view text, const Ruleset& rs);

/// Runs the catalog over the label, last match wins. Throws
/// InterpretationFailure when no frequency rule matched.
ScheduleParameters interpret(const LabelText& label, const Ruleset& rs);
ScheduleParameters interpret(std::string_view normalized_text, const Ruleset& rs);

/// Structured-text form of the parameters (keys frequency {num, den},
/// frequency_unit, duration, duration_unit, time_of_days, matches, label_text).
std::string to_json(const ScheduleParameters& params, int indent = 2);

/// Inverse of to_json. Throws MalformedInput on schema or invariant violations.
ScheduleParameters schedule_parameters_from_json(std::string_view raw);

}  // namespace memorais
