#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "memorais/pipeline.hpp"

namespace httplib {
class Server;
}

namespace memorais {

inline constexpr std::size_t kMaxRequestBytes = 1 << 20;

struct HttpResponse {
  int status = 200;
  std::string content_type;
  std::string body;
  std::vector<std::pair<std::string, std::string>> headers;
};

struct ServiceOptions {
  Ruleset rules = default_ruleset();
  TimeDefaults time;
  /// Fixed DTSTAMP for every response; when unset the clock is sampled.
  std::optional<UtcTimestamp> frozen_dtstamp;
  /// Supplies the anchor date for requests that carry none.
  std::function<LocalDate()> today;
  std::function<UtcTimestamp()> now;
};

/// Stateless request handling for POST /v1/reminders and GET /healthz.
/// All members are read-only after construction, so one instance serves
/// concurrent requests.
class ReminderService {
 public:
  explicit ReminderService(ServiceOptions options);

  HttpResponse handle_reminders(std::string_view body) const;
  HttpResponse healthz() const;

  /// Registers both routes on `server` and caps the payload size.
  void mount(httplib::Server& server) const;

  const Ruleset& rules() const { return options_.rules; }

 private:
  ServiceOptions options_;
};

/// Local calendar date and UTC time of the host clock.
LocalDate today_local();
UtcTimestamp now_utc();

}  // namespace memorais
