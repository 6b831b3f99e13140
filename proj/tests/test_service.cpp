#include <fstream>
#include <iterator>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "memorais/service.hpp"

using namespace memorais;
using nlohmann::json;

namespace {

ServiceOptions frozen_options() {
  ServiceOptions o;
  o.frozen_dtstamp = parse_utc_timestamp("2024-01-01T00:00:00Z");
  o.today = [] { return LocalDate{std::chrono::year{2024}, std::chrono::month{1}, std::chrono::day{1}}; };
  return o;
}

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(MEMORAIS_FIXTURES_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_SUITE("service") {

TEST_CASE("text request yields a calendar attachment") {
  ReminderService svc(frozen_options());
  auto r = svc.handle_reminders(R"({"text":"take 2 tablets twice per day for 10 days"})");
  CHECK(r.status == 200);
  CHECK(r.content_type == "text/calendar");
  REQUIRE(r.headers.size() == 1);
  CHECK(r.headers[0].first == "Content-Disposition");
  CHECK(r.headers[0].second == "attachment; filename=\"reminders.ics\"");
  CHECK(parse_ics_roundtrip(r.body).size() == 20);
}

TEST_CASE("ocr request in generic form") {
  ReminderService svc(frozen_options());
  std::string body = R"({"anchor_date":"2024-01-01","ocr":)" +
                     fixture("label_shuffled.generic.json") + "}";
  auto r = svc.handle_reminders(body);
  CHECK(r.status == 200);
  CHECK(parse_ics_roundtrip(r.body).size() == 20);
}

TEST_CASE("non-directive text is 422 with the normalized text") {
  ReminderService svc(frozen_options());
  auto r = svc.handle_reminders(R"({"text":"Shake   WELL before use for 7 days"})");
  CHECK(r.status == 422);
  auto j = json::parse(r.body);
  CHECK(j["error"] == "InterpretationFailure");
  CHECK(j["normalized_text"] == "shake well before use for 7 days");
  REQUIRE(j["partial_matches"].size() >= 1);
  CHECK(j["partial_matches"].back()["rule_id"] == "for-n-days");
}

TEST_CASE("schedule errors are 422") {
  ReminderService svc(frozen_options());
  CHECK(svc.handle_reminders(R"({"text":"take monthly"})").status == 422);
}

TEST_CASE("malformed requests are 400") {
  ReminderService svc(frozen_options());
  for (const char* body : {"", "{", "[]", R"({"text":"daily","ocr":{"fragments":[]}})", "{}",
                           R"({"text":5})", R"({"text":"daily","anchor_date":"2024-13-01"})",
                           R"({"text":"daily","extra":1})",
                           R"({"ocr":{"fragments":[{"text":"x"}]}})"}) {
    auto r = svc.handle_reminders(body);
    CHECK_MESSAGE(r.status == 400, body);
    CHECK(r.content_type == "application/json");
    CHECK(json::parse(r.body)["error"] == "MalformedInput");
  }
}

TEST_CASE("oversized requests are 413") {
  ReminderService svc(frozen_options());
  std::string big = R"({"text":")" + std::string(kMaxRequestBytes, 'a') + "\"}";
  CHECK(svc.handle_reminders(big).status == 413);
}

TEST_CASE("healthz reports the ruleset version") {
  ReminderService svc(frozen_options());
  auto r = svc.healthz();
  CHECK(r.status == 200);
  auto j = json::parse(r.body);
  CHECK(j["status"] == "ok");
  CHECK(j["ruleset_version"] == default_ruleset().version);
}

TEST_CASE("anchor defaults to the injected today") {
  ReminderService svc(frozen_options());
  auto r = svc.handle_reminders(R"({"text":"every night"})");
  CHECK(r.body.find("DTSTART:20240101T200000") != std::string::npos);
}

TEST_CASE("routes over real HTTP") {
  ReminderService svc(frozen_options());
  httplib::Server server;
  svc.mount(server);
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/healthz");
  REQUIRE(health);
  CHECK(health->status == 200);

  auto ok = client.Post("/v1/reminders", R"({"text":"twice per day for 10 days","anchor_date":"2024-01-01"})",
                        "application/json");
  REQUIRE(ok);
  CHECK(ok->status == 200);
  CHECK(ok->get_header_value("Content-Type").rfind("text/calendar", 0) == 0);
  CHECK(ok->get_header_value("Content-Disposition") == "attachment; filename=\"reminders.ics\"");
  CHECK(ok->body == svc.handle_reminders(
                        R"({"text":"twice per day for 10 days","anchor_date":"2024-01-01"})").body);

  auto bad = client.Post("/v1/reminders", R"({"text":"shake well"})", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 422);

  auto big = client.Post("/v1/reminders", std::string(kMaxRequestBytes + 10, ' '), "application/json");
  REQUIRE(big);
  CHECK(big->status == 413);

  server.stop();
  t.join();
}

TEST_CASE("concurrent requests give identical answers") {
  ReminderService svc(frozen_options());
  const std::string body = R"({"text":"take 1 tablet every 8 hours for 5 days"})";
  const std::string expected = svc.handle_reminders(body).body;
  std::vector<std::thread> threads;
  std::vector<int> same(8, 0);
  for (int i = 0; i < 8; ++i)
    threads.emplace_back([&, i] {
      for (int k = 0; k < 20; ++k) same[i] += svc.handle_reminders(body).body == expected;
    });
  for (auto& t : threads) t.join();
  for (int s : same) CHECK(s == 20);
}

}  // TEST_SUITE
