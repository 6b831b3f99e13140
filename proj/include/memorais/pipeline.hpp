#pragma once

#include <string_view>

#include "memorais/ics.hpp"
#include "memorais/interpreter.hpp"
#include "memorais/ocr.hpp"
#include "memorais/rules.hpp"
#include "memorais/scheduler.hpp"
#include "memorais/textnorm.hpp"

namespace memorais {

/// Everything a pipeline run depends on besides its input.
struct PipelineConfig {
  const Ruleset* rules = &default_ruleset();
  TimeDefaults time;
  OrderingParams ordering;
  CalendarMeta meta;
};

struct PipelineResult {
  LabelText label;
  ScheduleParameters params;
  SchedulePlan plan;
  IcsDocument ics;
};

/// Orders and normalizes OCR fragments.
LabelText label_from_ocr(const OcrDocument& doc, const OrderingParams& ordering = {});

/// Normalizes a raw direction string given directly (no OCR step).
LabelText label_from_text(std::string_view text);

/// interpret -> schedule -> emit.
PipelineResult run_pipeline(const LabelText& label, const LocalDate& anchor,
                            const PipelineConfig& cfg);

/// schedule -> emit on already-interpreted parameters.
IcsDocument emit_from_parameters(const ScheduleParameters& params, const LocalDate& anchor,
                                 const PipelineConfig& cfg);

}  // namespace memorais
