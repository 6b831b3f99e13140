// Python bindings for the memorais core. Structured values cross the
// boundary as dicts and lists; calendars come back as bytes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"
#include "memorais/errors.hpp"
#include "memorais/pipeline.hpp"

namespace py = pybind11;
using namespace memorais;

namespace {

py::object json_to_py(const std::string& dumped) {
  return py::module_::import("json").attr("loads")(dumped);
}

std::string py_to_json(const py::object& value) {
  return py::module_::import("json").attr("dumps")(value).cast<std::string>();
}

PipelineConfig config(const std::string& dtstamp, const Ruleset* rules) {
  PipelineConfig cfg;
  if (rules) cfg.rules = rules;
  cfg.meta.dtstamp = parse_utc_timestamp(dtstamp);
  return cfg;
}

std::optional<Ruleset> optional_rules(const std::optional<std::string>& catalog) {
  if (!catalog) return std::nullopt;
  return load_ruleset(*catalog);
}

LabelText label_for(const std::optional<std::string>& text, const std::optional<std::string>& ocr,
                    const std::string& format) {
  if (text.has_value() == ocr.has_value())
    throw MalformedInput("pass exactly one of text= or ocr=");
  if (text) return label_from_text(*text);
  return label_from_ocr(parse_ocr_document(*ocr, parse_ocr_format(format), "python"));
}

py::bytes pipeline(std::optional<std::string> text, std::optional<std::string> ocr,
                   const std::string& format, const std::string& anchor_date,
                   const std::string& dtstamp, std::optional<std::string> catalog) {
  auto rules = optional_rules(catalog);
  auto label = label_for(text, ocr, format);
  auto cfg = config(dtstamp, rules ? &*rules : nullptr);
  return py::bytes(run_pipeline(label, parse_date(anchor_date), cfg).ics.bytes);
}

py::object interpret_py(std::optional<std::string> text, std::optional<std::string> ocr,
                        const std::string& format, std::optional<std::string> catalog) {
  auto rules = optional_rules(catalog);
  return json_to_py(to_json(interpret(label_for(text, ocr, format), rules ? *rules : default_ruleset())));
}

py::bytes schedule_py(const py::object& params, const std::string& anchor_date,
                      const std::string& dtstamp) {
  auto p = schedule_parameters_from_json(py_to_json(params));
  return py::bytes(emit_from_parameters(p, parse_date(anchor_date), config(dtstamp, nullptr)).bytes);
}

std::vector<std::string> expand_py(const py::object& params, const std::string& anchor_date,
                                   int horizon_days) {
  TimeDefaults t;
  t.default_horizon_days = horizon_days;
  auto plan = build_schedule(schedule_parameters_from_json(py_to_json(params)),
                             parse_date(anchor_date), t);
  std::vector<std::string> out;
  for (const auto& o : expand_occurrences(plan)) out.push_back(format_datetime(o));
  return out;
}

std::vector<std::string> reading_order_py(const std::string& ocr, const std::string& format,
                                          double line_overlap_fraction) {
  OrderingParams params;
  params.line_overlap_fraction = line_overlap_fraction;
  std::vector<std::string> out;
  for (const auto& f : reading_order(parse_ocr_document(ocr, parse_ocr_format(format), "python"), params))
    out.push_back(f.text);
  return out;
}

py::object lint_py(const std::vector<std::string>& corpus, std::optional<std::string> catalog) {
  auto rules = optional_rules(catalog);
  return json_to_py(lint_ruleset(rules ? *rules : default_ruleset(), corpus).to_json());
}

}  // namespace

PYBIND11_MODULE(memorais, m) {
  m.doc() = "Prescription label directions to iCalendar medication reminders";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<MalformedInput>(m, "MalformedInput", error.ptr());
  py::register_exception<CatalogError>(m, "CatalogError", error.ptr());
  py::register_exception<InterpretationFailure>(m, "InterpretationFailure", error.ptr());
  py::register_exception<ScheduleError>(m, "ScheduleError", error.ptr());
  py::register_exception<EmitError>(m, "EmitError", error.ptr());

  m.def("pipeline", &pipeline, py::kw_only(), py::arg("text") = py::none(),
        py::arg("ocr") = py::none(), py::arg("format") = "paddle", py::arg("anchor_date"),
        py::arg("dtstamp"), py::arg("catalog") = py::none(),
        "Run the whole pipeline on raw text or an OCR document; returns .ics bytes.");
  m.def("interpret", &interpret_py, py::kw_only(), py::arg("text") = py::none(),
        py::arg("ocr") = py::none(), py::arg("format") = "paddle",
        py::arg("catalog") = py::none(), "Schedule parameters as a dict.");
  m.def("schedule", &schedule_py, py::arg("params"), py::kw_only(), py::arg("anchor_date"),
        py::arg("dtstamp"), "Emit .ics bytes for an interpret() result.");
  m.def("expand", &expand_py, py::arg("params"), py::kw_only(), py::arg("anchor_date"),
        py::arg("horizon_days") = 30, "Occurrence timestamps as YYYY-MM-DDTHH:MM strings.");
  m.def("reading_order", &reading_order_py, py::arg("ocr"), py::kw_only(),
        py::arg("format") = "paddle", py::arg("line_overlap_fraction") = 0.5,
        "Fragment texts in reading order.");
  m.def("lint", &lint_py, py::arg("corpus"), py::kw_only(), py::arg("catalog") = py::none());
  m.def("default_catalog", [] { return std::string(default_catalog_source()); });
}
