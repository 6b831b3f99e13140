#include "memorais/service.hpp"

#include <ctime>

#include "httplib.h"
#include "json.hpp"

namespace memorais {

using nlohmann::json;

namespace {

HttpResponse json_response(int status, const json& body) {
  return HttpResponse{status, "application/json", body.dump(), {}};
}

HttpResponse error_response(int status, std::string_view kind, std::string_view message) {
  return json_response(status, {{"error", kind}, {"message", message}});
}

}  // namespace

LocalDate today_local() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  localtime_r(&t, &tm);
  return LocalDate{std::chrono::year{tm.tm_year + 1900},
                   std::chrono::month{static_cast<unsigned>(tm.tm_mon + 1)},
                   std::chrono::day{static_cast<unsigned>(tm.tm_mday)}};
}

UtcTimestamp now_utc() {
  return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

ReminderService::ReminderService(ServiceOptions options) : options_(std::move(options)) {
  if (!options_.today) options_.today = today_local;
  if (!options_.now) options_.now = now_utc;
}

HttpResponse ReminderService::handle_reminders(std::string_view body) const {
  if (body.size() > kMaxRequestBytes)
    return error_response(413, "PayloadTooLarge", "request body exceeds 1 MiB");

  json req;
  try {
    req = json::parse(body.begin(), body.end());
  } catch (const json::parse_error& e) {
    return error_response(400, "MalformedInput", e.what());
  }
  if (!req.is_object()) return error_response(400, "MalformedInput", "body must be an object");
  for (const auto& [key, _] : req.items())
    if (key != "ocr" && key != "text" && key != "anchor_date")
      return error_response(400, "MalformedInput", "unknown field '" + key + "'");
  const bool has_ocr = req.contains("ocr");
  const bool has_text = req.contains("text");
  if (has_ocr == has_text)
    return error_response(400, "MalformedInput", "exactly one of 'ocr' or 'text' is required");

  try {
    LocalDate anchor = options_.today();
    if (req.contains("anchor_date")) {
      if (!req["anchor_date"].is_string())
        return error_response(400, "MalformedInput", "anchor_date must be a string");
      try {
        anchor = parse_date(req["anchor_date"].get<std::string>());
      } catch (const std::invalid_argument& e) {
        return error_response(400, "MalformedInput", e.what());
      }
    }

    LabelText label;
    if (has_text) {
      if (!req["text"].is_string())
        return error_response(400, "MalformedInput", "text must be a string");
      label = label_from_text(req["text"].get<std::string>());
    } else {
      OcrDocument doc = parse_ocr_document(req["ocr"].dump(), OcrFormat::generic_json, "request");
      label = label_from_ocr(doc);
    }

    PipelineConfig cfg;
    cfg.rules = &options_.rules;
    cfg.time = options_.time;
    cfg.meta.dtstamp = options_.frozen_dtstamp ? *options_.frozen_dtstamp : options_.now();
    PipelineResult result = run_pipeline(label, anchor, cfg);

    HttpResponse resp{200, "text/calendar", std::move(result.ics.bytes), {}};
    resp.headers.emplace_back("Content-Disposition", "attachment; filename=\"reminders.ics\"");
    return resp;
  } catch (const MalformedInput& e) {
    return error_response(400, e.kind(), e.what());
  } catch (const InterpretationFailure& e) {
    json partial = json::array();
    for (const auto& m : e.partial_matches())
      partial.push_back({{"rule_id", m.rule_id}, {"start", m.start}, {"end", m.end}});
    return json_response(422, {{"error", e.kind()},
                               {"normalized_text", e.normalized_text()},
                               {"partial_matches", partial}});
  } catch (const ScheduleError& e) {
    return error_response(422, e.kind(), e.what());
  } catch (const std::exception& e) {
    return error_response(500, "InternalError", e.what());
  }
}

HttpResponse ReminderService::healthz() const {
  return json_response(200, {{"status", "ok"}, {"ruleset_version", options_.rules.version}});
}

void ReminderService::mount(httplib::Server& server) const {
  server.set_payload_max_length(kMaxRequestBytes);
  auto send = [](const HttpResponse& r, httplib::Response& res) {
    res.status = r.status;
    for (const auto& [k, v] : r.headers) res.set_header(k, v);
    res.set_content(r.body, r.content_type);
  };
  server.Post("/v1/reminders", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(handle_reminders(req.body), res);
  });
  server.Get("/healthz", [this, send](const httplib::Request&, httplib::Response& res) {
    send(healthz(), res);
  });
}

}  // namespace memorais
