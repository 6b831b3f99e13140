#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"

#include "memorais/interpreter.hpp"
#include "memorais/rules.hpp"
#include "memorais/textnorm.hpp"

namespace memorais {

namespace {

// Parameter values as comparable strings, keyed by parameter name.
using Writes = std::map<std::string, std::set<std::string>>;

void record_writes(const RuleApplication& app, Writes& writes) {
  const Rule& r = *app.rule;
  if (r.kind == RuleKind::frequency_indicator) {
    writes["frequency"].insert(app.frequency->to_string() + "/" +
                               std::string(to_string(*r.frequency_unit)));
  } else {
    writes["duration"].insert(std::to_string(*app.duration) + " " +
                              std::string(to_string(*r.duration_unit)));
  }
}

}  // namespace

bool LintReport::has_conflicts() const {
  return std::any_of(entries.begin(), entries.end(),
                     [](const LintEntry& e) { return !e.conflicts.empty(); });
}

std::string LintReport::to_json() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    list.push_back({{"text", e.text},
                    {"normalized_text", e.normalized_text},
                    {"matched_rules", e.matched_rules},
                    {"conflicts", e.conflicts}});
  }
  j["entries"] = list;
  j["unmatched"] = unmatched;
  j["unused_rules"] = unused_rules;
  j["clean"] = clean();
  return j.dump(2);
}

LintReport lint_ruleset(const Ruleset& rs, const std::vector<std::string>& corpus) {
  LintReport report;
  std::set<std::string> used;

  for (const std::string& raw : corpus) {
    LintEntry entry;
    entry.text = raw;
    entry.normalized_text = normalize_piece(raw);

    Writes writes;
    for (const RuleApplication& app : apply_rules(entry.normalized_text, rs)) {
      const std::string& id = app.rule->id;
      if (std::find(entry.matched_rules.begin(), entry.matched_rules.end(), id) ==
          entry.matched_rules.end())
        entry.matched_rules.push_back(id);
      used.insert(id);
      if (app.rule->kind == RuleKind::frequency_indicator) entry.frequency_matched = true;
      record_writes(app, writes);
    }
    for (const auto& [param, values] : writes)
      if (values.size() > 1) entry.conflicts.push_back(param);

    if (!entry.frequency_matched) report.unmatched.push_back(raw);
    report.entries.push_back(std::move(entry));
  }

  for (const Rule& r : rs.rules)
    if (!used.contains(r.id)) report.unused_rules.push_back(r.id);
  return report;
}

}  // namespace memorais
