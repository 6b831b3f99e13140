// Drives the built executables as subprocesses.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "doctest.h"
#include "json.hpp"
#include "memorais/ics.hpp"
#include "memorais/service.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("memorais-cli-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args) {
  const fs::path out = scratch() / "stdout", err = scratch() / "stderr";
  std::string cmd = args + " >" + out.string() + " 2>" + err.string();
  int raw = std::system(cmd.c_str());
  return Run{WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
}

std::string cli() { return MEMORAIS_CLI_PATH; }
std::string fixture(const std::string& name) {
  return std::string(MEMORAIS_FIXTURES_DIR) + "/" + name;
}
const std::string kFrozen = " --anchor 2024-01-01 --dtstamp 2024-01-01T00:00:00Z";

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("pipeline on the fixture OCR document") {
  Run r = run(cli() + " pipeline " + fixture("label_twice_per_day.paddle.json") + kFrozen);
  REQUIRE(r.status == 0);
  CHECK(count_of(r.out, "BEGIN:VEVENT") == 2);
  CHECK(count_of(r.out, "COUNT=10\r\n") == 2);
  CHECK(r.out == slurp(fixture("golden_twice_per_day.ics")));
}

TEST_CASE("pipeline output is byte identical across runs") {
  std::string cmd = cli() + " pipeline " + fixture("label_shuffled.paddle.json") + kFrozen;
  CHECK(run(cmd).out == run(cmd).out);
}

TEST_CASE("every night is one evening event") {
  Run r = run(cli() + " pipeline --text 'every night'" + kFrozen);
  REQUIRE(r.status == 0);
  CHECK(count_of(r.out, "BEGIN:VEVENT") == 1);
  CHECK(r.out.find("DTSTART:20240101T200000\r\n") != std::string::npos);
  CHECK(r.out.find("RRULE:FREQ=DAILY;COUNT=30\r\n") != std::string::npos);
}

TEST_CASE("non-directive text exits 3 with the normalized text") {
  Run r = run(cli() + " pipeline --text 'Shake WELL'" + kFrozen);
  CHECK(r.status == 3);
  CHECK(r.out.empty());
  auto j = json::parse(r.err);
  CHECK(j["error"] == "InterpretationFailure");
  CHECK(j["normalized_text"] == "shake well");
  CHECK(run(cli() + " interpret --text 'for 7 days'").status == 3);
}

TEST_CASE("interpret prints the parameters document") {
  Run r = run(cli() + " interpret --text 'every other day'");
  REQUIRE(r.status == 0);
  auto j = json::parse(r.out);
  CHECK(j["frequency"] == json{{"num", 1}, {"den", 2}});
  CHECK(j["frequency_unit"] == "days");

  Run f = run(cli() + " interpret " + fixture("label_twice_per_day.paddle.json"));
  REQUIRE(f.status == 0);
  auto m = json::parse(f.out)["matches"];
  REQUIRE(m.size() == 2);
  CHECK(m[0]["rule_id"] == "twice-per-day");
  CHECK(m[1]["rule_id"] == "for-n-days");
  std::string text = json::parse(f.out)["label_text"];
  CHECK(text.substr(m[0]["start"].get<std::size_t>(),
                    m[0]["end"].get<std::size_t>() - m[0]["start"].get<std::size_t>()) ==
        "twice per day");
  CHECK(text.substr(m[1]["start"].get<std::size_t>(),
                    m[1]["end"].get<std::size_t>() - m[1]["start"].get<std::size_t>()) ==
        "for 10 days");
}

TEST_CASE("interpret then schedule equals pipeline") {
  const std::string params = (scratch() / "params.json").string();
  for (const std::string input :
       {fixture("label_twice_per_day.paddle.json"), fixture("label_shuffled.paddle.json"),
        std::string("--text 'take 1 capsule every 8 hours for 3 days'")}) {
    REQUIRE(run(cli() + " interpret " + input + " --out " + params).status == 0);
    Run composed = run(cli() + " schedule " + params + kFrozen);
    Run direct = run(cli() + " pipeline " + input + kFrozen);
    REQUIRE(direct.status == 0);
    CHECK(composed.status == 0);
    CHECK(composed.out == direct.out);
  }
  CHECK(run("cat " + params + " | " + cli() + " schedule -" + kFrozen).out ==
        run(cli() + " pipeline --text 'take 1 capsule every 8 hours for 3 days'" + kFrozen).out);
}

TEST_CASE("expand lists occurrences") {
  Run r = run(cli() + " expand --text 'twice per day for 10 days' --anchor 2024-01-01");
  REQUIRE(r.status == 0);
  CHECK(count_of(r.out, "\n") == 20);
  CHECK(r.out.rfind("2024-01-01T08:00\n2024-01-01T20:00\n2024-01-02T08:00\n", 0) == 0);

  Run eod = run(cli() + " expand --text 'every other day' --anchor 2024-01-01");
  CHECK(count_of(eod.out, "\n") == 15);
  Run shorter = run(cli() + " expand --text 'every other day' --anchor 2024-01-01 --horizon 6");
  CHECK(shorter.out == "2024-01-01T08:00\n2024-01-03T08:00\n2024-01-05T08:00\n");
}

TEST_CASE("malformed input and schedule errors") {
  const fs::path bad = scratch() / "bad.json";
  std::ofstream(bad) << R"([{"text":"x","box":[[0,0],[1,0]],"score":0.9}])";
  Run r = run(cli() + " pipeline " + bad.string() + kFrozen);
  CHECK(r.status == 2);
  CHECK(json::parse(r.err)["error"] == "MalformedInput");
  CHECK(run(cli() + " pipeline --text daily --anchor 2024-02-30").status == 2);
  CHECK(run(cli() + " pipeline /nonexistent/file.json").status == 2);
  CHECK(run(cli() + " pipeline --text 'take monthly'" + kFrozen).status == 4);
}

TEST_CASE("external OCR command") {
  const std::string doc = fixture("label_twice_per_day.paddle.json");
  Run ok = run(cli() + " pipeline --ocr-cmd 'cat " + doc + " # {}' label.png" + kFrozen);
  REQUIRE(ok.status == 0);
  CHECK(ok.out == slurp(fixture("golden_twice_per_day.ics")));
  CHECK(run(cli() + " pipeline --ocr-cmd 'false' label.png" + kFrozen).status == 5);
  CHECK(run(cli() + " pipeline --ocr-cmd 'echo not-json' label.png" + kFrozen).status == 5);
}

TEST_CASE("rules-lint") {
  Run clean = run(cli() + " rules-lint --corpus " + std::string(MEMORAIS_CORPUS_PATH));
  CHECK(clean.status == 0);
  auto j = json::parse(clean.out);
  CHECK(j["unmatched"].empty());

  const fs::path corpus = scratch() / "corpus.txt";
  std::ofstream(corpus) << "twice per day\nshake well\n";
  Run dirty = run(cli() + " rules-lint --corpus " + corpus.string());
  CHECK(dirty.status == 1);
  CHECK(json::parse(dirty.out)["unmatched"] == json::array({"shake well"}));

  const fs::path catalog = scratch() / "dup.json";
  std::ofstream(catalog) << R"({"version":"1","rules":[
    {"id":"x","kind":"frequency","pattern":"a","frequency":{"num":1,"den":1},"frequency_unit":"days"},
    {"id":"x","kind":"frequency","pattern":"b","frequency":{"num":1,"den":1},"frequency_unit":"days"}]})";
  Run broken = run(cli() + " rules-lint --rules " + catalog.string() + " --corpus " + corpus.string());
  CHECK(broken.status == 2);
  CHECK(json::parse(broken.err)["rule_id"] == "x");
  // A broken catalog is reported before any input is read.
  CHECK(run(cli() + " pipeline /nonexistent --rules " + catalog.string()).status == 2);
  CHECK(json::parse(run(cli() + " pipeline /nonexistent --rules " + catalog.string()).err)["error"] ==
        "CatalogError");
  CHECK(run("MEMORAIS_RULES=" + catalog.string() + " " + cli() + " interpret --text daily").status == 2);
}

TEST_CASE("server refuses to start with a bad catalog") {
  const fs::path catalog = scratch() / "bad-catalog.json";
  std::ofstream(catalog) << R"({"version":"1","rules":[{"id":"y","kind":"duration","pattern":"for"}]})";
  Run r = run(std::string(MEMORAIS_SERVER_PATH) + " --port 0 --rules " + catalog.string());
  CHECK(r.status == 2);
  CHECK(r.err.find("startup failed") != std::string::npos);
}

TEST_CASE("CLI and service bytes agree") {
  memorais::ServiceOptions o;
  o.frozen_dtstamp = memorais::parse_utc_timestamp("2024-01-01T00:00:00Z");
  memorais::ReminderService svc(o);
  std::string body = R"({"anchor_date":"2024-01-01","ocr":)" +
                     slurp(fixture("label_shuffled.generic.json")) + "}";
  auto resp = svc.handle_reminders(body);
  REQUIRE(resp.status == 200);
  Run r = run(cli() + " pipeline --format generic " + fixture("label_shuffled.generic.json") + kFrozen);
  REQUIRE(r.status == 0);
  CHECK(r.out == resp.body);
  Run p = run(cli() + " pipeline " + fixture("label_shuffled.paddle.json") + kFrozen);
  CHECK(p.out == resp.body);
}

}  // TEST_SUITE
