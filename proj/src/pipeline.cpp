#include "memorais/pipeline.hpp"

namespace memorais {

LabelText label_from_ocr(const OcrDocument& doc, const OrderingParams& ordering) {
  return normalize(reading_order(doc, ordering));
}

LabelText label_from_text(std::string_view text) {
  return normalize(std::vector<std::string>{std::string(text)});
}

PipelineResult run_pipeline(const LabelText& label, const LocalDate& anchor,
                            const PipelineConfig& cfg) {
  PipelineResult r;
  r.label = label;
  r.params = interpret(label, *cfg.rules);
  r.plan = build_schedule(r.params, anchor, cfg.time);
  r.ics = emit_ics(r.plan, cfg.meta);
  return r;
}

IcsDocument emit_from_parameters(const ScheduleParameters& params, const LocalDate& anchor,
                                 const PipelineConfig& cfg) {
  return emit_ics(build_schedule(params, anchor, cfg.time), cfg.meta);
}

}  // namespace memorais
