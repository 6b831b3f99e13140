#include <string>

#include "doctest.h"
#include "memorais/errors.hpp"
#include "memorais/rules.hpp"

using namespace memorais;

namespace {

std::string catalog(const std::string& rules) {
  return R"({"version":"t1","rules":[)" + rules + "]}";
}

/// Returns the (rule id, reason) of the CatalogError thrown for `raw`.
std::pair<std::string, std::string> catalog_error(const std::string& raw) {
  try {
    load_ruleset(raw);
  } catch (const CatalogError& e) {
    return {e.rule_id(), e.reason()};
  }
  FAIL("expected CatalogError");
  return {};
}

const char* kEveryOtherDay =
    R"({"id":"every-other-day","kind":"frequency","pattern":"every other day",
        "frequency":{"num":1,"den":2},"frequency_unit":"days"})";

}  // namespace

TEST_SUITE("rule-catalog") {

TEST_CASE("rational arithmetic stays exact") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, 2) * Rational(4) == Rational(2));
  CHECK(Rational(1) / Rational(8) == Rational(1, 8));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(3, 6).to_string() == "1/2");
  CHECK_THROWS_AS(Rational(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("loads the every-other-day example as one half per day") {
  Ruleset rs = load_ruleset(catalog(kEveryOtherDay));
  REQUIRE(rs.rules.size() == 1);
  const Rule& r = rs.rules[0];
  CHECK(r.kind == RuleKind::frequency_indicator);
  CHECK(r.frequency == Rational(1, 2));
  CHECK(r.frequency_unit == TimeUnit::days);
  CHECK(r.priority == 0);
  CHECK(std::regex_search(std::string("take every other day"), *r.regex));
}

TEST_CASE("catalog errors name the rule and the reason") {
  CHECK(catalog_error(catalog(std::string(R"({"id":"x","kind":"frequency","pattern":"a",
      "frequency":{"num":1,"den":1},"frequency_unit":"days"},)") +
                              R"({"id":"x","kind":"frequency","pattern":"b",
      "frequency":{"num":1,"den":1},"frequency_unit":"days"})")) ==
        std::pair<std::string, std::string>{"x", "duplicate id"});

  auto [id, reason] = catalog_error(catalog(
      R"({"id":"dur","kind":"duration_indicator","pattern":"for [0-9]+ days","duration_unit":"days"})"));
  CHECK(id == "dur");
  CHECK(reason.find("capture group") != std::string::npos);

  CHECK(catalog_error(catalog(R"({"id":"bad","kind":"frequency","pattern":"(unclosed",
      "frequency":{"num":1,"den":1},"frequency_unit":"days"})")).first == "bad");
  CHECK(catalog_error(catalog(R"({"id":"nofreq","kind":"frequency","pattern":"a",
      "frequency_unit":"days"})")).second == "frequency rule requires 'frequency'");
  CHECK(catalog_error(catalog(R"({"id":"mixed","kind":"frequency","pattern":"a",
      "frequency":{"num":1,"den":1},"frequency_unit":"days","duration_unit":"days"})")).second ==
        "frequency rule must not set 'duration_unit'");
  CHECK(catalog_error(catalog(R"({"id":"d2","kind":"duration","pattern":"for ([0-9]+) days",
      "duration_unit":"days","frequency":{"num":1,"den":1}})")).second ==
        "duration rule must not set 'frequency'");
  CHECK(catalog_error(catalog(R"({"id":"up","kind":"frequency","pattern":"Daily",
      "frequency":{"num":1,"den":1},"frequency_unit":"days"})")).second ==
        "pattern must be lowercase");
  CHECK(catalog_error(catalog(R"({"id":"typo","kind":"frequency","pattern":"a",
      "frequency":{"num":1,"den":1},"frequency_unti":"days"})")).second.find("unknown field") ==
        0);
  CHECK(catalog_error(catalog(R"({"id":"zero","kind":"frequency","pattern":"a",
      "frequency":{"num":0,"den":1},"frequency_unit":"days"})")).first == "zero");
  CHECK(catalog_error(catalog(R"({"id":"cap","kind":"frequency","pattern":"every ([0-9]+) hours",
      "frequency":{"num":1,"den":1},"frequency_unit":"hours"})")).first == "cap");
  CHECK(catalog_error(R"({"rules":[]})").first.empty());
  CHECK(catalog_error("{").first.empty());
}

TEST_CASE("escaped uppercase classes are allowed in patterns") {
  CHECK_NOTHROW(load_ruleset(catalog(R"({"id":"ok","kind":"frequency","pattern":"\\bdaily\\b\\S*",
      "frequency":{"num":1,"den":1},"frequency_unit":"days"})")));
}

TEST_CASE("default catalog loads with the required rule counts") {
  const Ruleset& rs = default_ruleset();
  CHECK(rs.count(RuleKind::frequency_indicator) >= 20);
  CHECK(rs.count(RuleKind::duration_indicator) >= 9);
  CHECK_FALSE(rs.version.empty());
  for (std::size_t i = 0; i < rs.rules.size(); ++i) CHECK(rs.rules[i].priority == int(i));
}

TEST_CASE("default catalog carries the five published rules") {
  const Ruleset& rs = default_ruleset();
  const Rule* eod = rs.find("every-other-day");
  REQUIRE(eod);
  CHECK(eod->pattern == "every other day");
  CHECK(eod->frequency == Rational(1, 2));
  CHECK(eod->frequency_unit == TimeUnit::days);

  const Rule* tpd = rs.find("twice-per-day");
  REQUIRE(tpd);
  CHECK(tpd->pattern == "twice per day");
  CHECK(tpd->frequency == Rational(2));

  const Rule* night = rs.find("every-night");
  REQUIRE(night);
  CHECK(night->pattern == "every night");
  CHECK(night->frequency == Rational(1));
  CHECK(night->time_of_days == std::vector<TimeOfDay>{TimeOfDay::evening});

  const Rule* days = rs.find("for-n-days");
  REQUIRE(days);
  CHECK(days->pattern == "for ([0-9]+) days");
  CHECK(days->duration_unit == TimeUnit::days);

  const Rule* months = rs.find("after-n-months");
  REQUIRE(months);
  CHECK(months->pattern == "after ([0-9]+) months");
  CHECK(months->duration_unit == TimeUnit::months);
}

TEST_CASE("serialize then load reproduces the catalog") {
  const Ruleset& rs = default_ruleset();
  Ruleset again = load_ruleset(serialize_ruleset(rs));
  CHECK(again == rs);
  CHECK(serialize_ruleset(again) == serialize_ruleset(rs));
}

TEST_CASE("lint: matched, unmatched and conflicting strings") {
  const Ruleset& rs = default_ruleset();

  LintReport r1 = lint_ruleset(rs, {"twice per day"});
  REQUIRE(r1.entries.size() == 1);
  CHECK(r1.entries[0].matched_rules == std::vector<std::string>{"twice-per-day"});
  CHECK(r1.entries[0].conflicts.empty());
  CHECK(r1.clean());

  LintReport r2 = lint_ruleset(rs, {"shake well"});
  CHECK(r2.unmatched == std::vector<std::string>{"shake well"});
  CHECK_FALSE(r2.clean());

  // "every day" writes 1/day, "every other day" writes 1/2 per day.
  LintReport r3 = lint_ruleset(rs, {"take every day every other day"});
  REQUIRE(r3.entries.size() == 1);
  CHECK(r3.entries[0].conflicts == std::vector<std::string>{"frequency"});
  CHECK(r3.has_conflicts());
  CHECK(std::find(r3.unused_rules.begin(), r3.unused_rules.end(), "daily") ==
        r3.unused_rules.end());
  CHECK(std::find(r3.unused_rules.begin(), r3.unused_rules.end(), "weekly") !=
        r3.unused_rules.end());
}

TEST_CASE("lint normalizes corpus strings first") {
  LintReport r = lint_ruleset(default_ruleset(), {"Take TWO tablets EVERY NIGHT"});
  CHECK(r.entries[0].normalized_text == "take 2 tablets every night");
  CHECK(r.unmatched.empty());
}

}  // TEST_SUITE
