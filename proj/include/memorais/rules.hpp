#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace memorais {

/// Exact positive fraction, always stored in lowest terms with den > 0.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }

  bool is_integer() const { return den_ == 1; }
  std::string to_string() const;

 private:
  std::int64_t num_ = 1;
  std::int64_t den_ = 1;
};

enum class RuleKind { frequency_indicator, duration_indicator };
enum class TimeUnit { hours, days, weeks, months };
enum class TimeOfDay { morning, midday, afternoon, evening };

/// What the numeric capture group of a frequency rule means.
enum class CaptureRole {
  none,
  count,     ///< "3 times a day": the captured number multiplies the frequency
  interval,  ///< "every 8 hours": the captured number divides it
};

std::string_view to_string(RuleKind);
std::string_view to_string(TimeUnit);
std::string_view to_string(TimeOfDay);
std::string_view to_string(CaptureRole);
std::optional<RuleKind> parse_rule_kind(std::string_view);
std::optional<TimeUnit> parse_time_unit(std::string_view);
std::optional<TimeOfDay> parse_time_of_day(std::string_view);
std::optional<CaptureRole> parse_capture_role(std::string_view);

struct Rule {
  std::string id;
  RuleKind kind = RuleKind::frequency_indicator;
  std::string pattern;
  std::optional<Rational> frequency;
  std::optional<TimeUnit> frequency_unit;
  std::optional<TimeUnit> duration_unit;
  std::vector<TimeOfDay> time_of_days;
  CaptureRole capture = CaptureRole::none;
  std::string note;
  int priority = 0;  ///< position in the catalog

  /// Compiled form of `pattern`; shared between copies.
  std::shared_ptr<const std::regex> regex;

  friend bool operator==(const Rule& a, const Rule& b);
};

struct Ruleset {
  std::string version;
  std::string description;
  std::vector<Rule> rules;

  std::size_t count(RuleKind kind) const;
  const Rule* find(std::string_view id) const;

  friend bool operator==(const Ruleset&, const Ruleset&) = default;
};

/// Parses and validates a catalog document. Throws CatalogError naming the
/// offending rule id (empty for document-level problems).
Ruleset load_ruleset(std::string_view raw);

/// Validates an in-memory rule list the same way load_ruleset does and fills
/// in compiled patterns and priorities.
Ruleset make_ruleset(std::string version, std::vector<Rule> rules,
                     std::string description = {});

std::string serialize_ruleset(const Ruleset& rs);

/// Source of the catalog compiled into the library.
std::string_view default_catalog_source();

/// The embedded catalog, loaded once.
const Ruleset& default_ruleset();

struct LintEntry {
  std::string text;             ///< corpus string as given
  std::string normalized_text;  ///< what the rules were applied to
  std::vector<std::string> matched_rules;
  /// Parameters written more than once with different values.
  std::vector<std::string> conflicts;
  bool frequency_matched = false;
};

struct LintReport {
  std::vector<LintEntry> entries;
  std::vector<std::string> unmatched;     ///< corpus strings without a frequency hit
  std::vector<std::string> unused_rules;  ///< rules no corpus string matched

  bool has_conflicts() const;
  /// No unmatched strings and no conflicts.
  bool clean() const { return unmatched.empty() && !has_conflicts(); }
  std::string to_json() const;
};

/// Applies the catalog to every corpus string (after text normalization).
LintReport lint_ruleset(const Ruleset& rs, const std::vector<std::string>& corpus);

}  // namespace memorais
