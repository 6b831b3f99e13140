// memorais: prescription label directions -> iCalendar reminders.
//
//   memorais pipeline  [INPUT] [--text T] [--format paddle|generic] [--ocr-cmd TPL]
//   memorais interpret [INPUT] [--text T] ...
//   memorais schedule  [PARAMS]            (interpret output -> .ics)
//   memorais expand    [INPUT] [--params P] [--horizon DAYS]
//   memorais rules-lint --corpus FILE [--rules FILE]

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "memorais/pipeline.hpp"
#include "memorais/service.hpp"

namespace {

using namespace memorais;

enum ExitCode : int {
  kOk = 0,
  kLintFailed = 1,
  kMalformed = 2,
  kInterpretation = 3,
  kSchedule = 4,
  kOcrCommand = 5,
  kInternal = 70,
};

struct Options {
  std::string input = "-";
  std::string rules_path;
  std::string time_defaults_path;
  std::string anchor;
  std::string dtstamp;
  std::string format = "paddle";
  std::optional<std::string> text;
  std::string ocr_cmd;
  std::string out_path;
  std::string params_path;
  std::string corpus_path;
  std::optional<int> horizon;
};

std::string read_all(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedInput("cannot read '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out.push_back(c);
  }
  return out + "'";
}

/// Runs the configured OCR command on an image and returns its stdout.
/// "{}" in the template is replaced by the quoted image path; without a
/// placeholder the path is appended.
std::string run_ocr_command(const std::string& tpl, const std::string& image) {
  std::string cmd = tpl;
  auto pos = cmd.find("{}");
  if (pos == std::string::npos)
    cmd += " " + shell_quote(image);
  else
    cmd.replace(pos, 2, shell_quote(image));

  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw OcrCommandError("cannot start OCR command");
  std::string output;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), n);
  int status = pclose(pipe);
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw OcrCommandError("OCR command failed with status " + std::to_string(status));
  return output;
}

Ruleset load_rules(const Options& o) {
  std::string path = o.rules_path;
  if (path.empty()) {
    if (const char* env = std::getenv("MEMORAIS_RULES"); env && *env) path = env;
  }
  if (path.empty()) return default_ruleset();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CatalogError("", "cannot read catalog '" + path + "'");
  return load_ruleset(std::string(std::istreambuf_iterator<char>(in), {}));
}

TimeDefaults load_time(const Options& o) {
  TimeDefaults cfg;
  if (!o.time_defaults_path.empty()) cfg = load_time_defaults(read_all(o.time_defaults_path));
  if (o.horizon) {
    if (*o.horizon <= 0) throw MalformedInput("--horizon must be positive");
    cfg.default_horizon_days = *o.horizon;
  }
  return cfg;
}

LocalDate anchor_date(const Options& o) {
  if (o.anchor.empty()) return today_local();
  try {
    return parse_date(o.anchor);
  } catch (const std::invalid_argument& e) {
    throw MalformedInput(std::string("--anchor: ") + e.what());
  }
}

UtcTimestamp dtstamp(const Options& o) {
  if (o.dtstamp.empty()) return now_utc();
  try {
    return parse_utc_timestamp(o.dtstamp);
  } catch (const std::invalid_argument& e) {
    throw MalformedInput(std::string("--dtstamp: ") + e.what());
  }
}

LabelText read_label(const Options& o) {
  if (o.text) return label_from_text(*o.text);
  if (!o.ocr_cmd.empty()) {
    std::string raw = run_ocr_command(o.ocr_cmd, o.input);
    try {
      return label_from_ocr(parse_ocr_document(raw, OcrFormat::paddle_json, o.input));
    } catch (const MalformedInput& e) {
      throw OcrCommandError(std::string("OCR command output: ") + e.what());
    }
  }
  OcrFormat fmt;
  try {
    fmt = parse_ocr_format(o.format);
  } catch (const std::invalid_argument& e) {
    throw MalformedInput(e.what());
  }
  return label_from_ocr(parse_ocr_document(read_all(o.input), fmt, o.input));
}

void write_output(const Options& o, const std::string& bytes) {
  if (o.out_path.empty()) {
    std::cout.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    std::cout.flush();
    return;
  }
  std::ofstream out(o.out_path, std::ios::binary);
  if (!out) throw MalformedInput("cannot write '" + o.out_path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

struct Context {
  Ruleset rules;
  PipelineConfig cfg;
  LocalDate anchor;
};

Context prepare(const Options& o) {
  Context ctx{load_rules(o), {}, anchor_date(o)};
  ctx.cfg.time = load_time(o);
  ctx.cfg.meta.dtstamp = dtstamp(o);
  return ctx;
}

int cmd_pipeline(const Options& o) {
  Context ctx = prepare(o);
  ctx.cfg.rules = &ctx.rules;
  PipelineResult r = run_pipeline(read_label(o), ctx.anchor, ctx.cfg);
  write_output(o, r.ics.bytes);
  return kOk;
}

int cmd_interpret(const Options& o) {
  Context ctx = prepare(o);
  ScheduleParameters params = interpret(read_label(o), ctx.rules);
  write_output(o, to_json(params) + "\n");
  return kOk;
}

int cmd_schedule(const Options& o) {
  Context ctx = prepare(o);
  ctx.cfg.rules = &ctx.rules;
  ScheduleParameters params = schedule_parameters_from_json(read_all(o.input));
  write_output(o, emit_from_parameters(params, ctx.anchor, ctx.cfg).bytes);
  return kOk;
}

int cmd_expand(const Options& o) {
  Context ctx = prepare(o);
  ScheduleParameters params = o.params_path.empty()
                                  ? interpret(read_label(o), ctx.rules)
                                  : schedule_parameters_from_json(read_all(o.params_path));
  SchedulePlan plan = build_schedule(params, ctx.anchor, ctx.cfg.time);
  std::string out;
  for (const auto& t : expand_occurrences(plan)) out += format_datetime(t) + "\n";
  write_output(o, out);
  return kOk;
}

int cmd_rules_lint(const Options& o) {
  Ruleset rules = load_rules(o);
  std::vector<std::string> corpus;
  std::istringstream in(read_all(o.corpus_path));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    corpus.push_back(line);
  }
  LintReport report = lint_ruleset(rules, corpus);
  write_output(o, report.to_json() + "\n");
  return report.clean() ? kOk : kLintFailed;
}

void report_error(const Error& e) {
  nlohmann::json j{{"error", e.kind()}, {"message", e.what()}};
  if (auto* f = dynamic_cast<const InterpretationFailure*>(&e))
    j["normalized_text"] = f->normalized_text();
  if (auto* m = dynamic_cast<const MalformedInput*>(&e); m && m->entry() != MalformedInput::npos)
    j["entry"] = m->entry();
  if (auto* c = dynamic_cast<const CatalogError*>(&e)) j["rule_id"] = c->rule_id();
  std::cerr << j.dump() << "\n";
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--rules", o.rules_path, "Rule catalog (default: embedded, or $MEMORAIS_RULES)");
  cmd->add_option("--time-defaults", o.time_defaults_path, "Time defaults document");
  cmd->add_option("--anchor", o.anchor, "First reminder date, YYYY-MM-DD (default: today)");
  cmd->add_option("--dtstamp", o.dtstamp, "DTSTAMP, YYYY-MM-DDTHH:MM:SSZ (default: now)");
  cmd->add_option("--out", o.out_path, "Write output here instead of stdout");
}

void add_input(CLI::App* cmd, Options& o) {
  cmd->add_option("input", o.input, "OCR document or image path ('-' for stdin)");
  cmd->add_option("--format", o.format, "OCR document format")
      ->check(CLI::IsMember({"paddle", "generic", "paddle_json", "generic_json"}));
  cmd->add_option("--text", o.text, "Raw direction text; skips OCR ingest");
  cmd->add_option("--ocr-cmd", o.ocr_cmd,
                  "Command producing paddle_json for the image; {} is replaced by the path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Turn prescription label directions into calendar reminders"};
  app.require_subcommand(1);
  Options o;

  auto* pipeline = app.add_subcommand("pipeline", "OCR document or text -> .ics");
  add_input(pipeline, o);
  add_common(pipeline, o);

  auto* interp = app.add_subcommand("interpret", "OCR document or text -> schedule parameters");
  add_input(interp, o);
  add_common(interp, o);

  auto* schedule = app.add_subcommand("schedule", "Schedule parameters document -> .ics");
  schedule->add_option("input", o.input, "Output of 'interpret' ('-' for stdin)");
  add_common(schedule, o);

  auto* expand = app.add_subcommand("expand", "List every reminder occurrence");
  add_input(expand, o);
  add_common(expand, o);
  expand->add_option("--params", o.params_path, "Use a schedule parameters document");
  expand->add_option("--horizon", o.horizon, "Days covered when no duration is given");

  auto* lint = app.add_subcommand("rules-lint", "Check a catalog against a sig corpus");
  lint->add_option("--rules", o.rules_path, "Rule catalog (default: embedded)");
  lint->add_option("--corpus", o.corpus_path, "One direction per line")->required();
  lint->add_option("--out", o.out_path, "Write the report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*pipeline) return cmd_pipeline(o);
    if (*interp) return cmd_interpret(o);
    if (*schedule) return cmd_schedule(o);
    if (*expand) return cmd_expand(o);
    if (*lint) return cmd_rules_lint(o);
  } catch (const MalformedInput& e) {
    report_error(e);
    return kMalformed;
  } catch (const CatalogError& e) {
    report_error(e);
    return kMalformed;
  } catch (const InterpretationFailure& e) {
    report_error(e);
    return kInterpretation;
  } catch (const ScheduleError& e) {
    report_error(e);
    return kSchedule;
  } catch (const OcrCommandError& e) {
    report_error(e);
    return kOcrCommand;
  } catch (const Error& e) {
    report_error(e);
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "InternalError"}, {"message", e.what()}}.dump() << "\n";
    return kInternal;
  }
  return kInternal;
}
