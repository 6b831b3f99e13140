// memorais-server: POST /v1/reminders and GET /healthz.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>

#include "CLI11.hpp"
#include "httplib.h"

#include "memorais/service.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"memorais reminder service"};
  int port = 8080;
  if (const char* env = std::getenv("MEMORAIS_PORT"); env && *env) port = std::atoi(env);
  std::string host = "0.0.0.0";
  std::string rules_path;
  if (const char* env = std::getenv("MEMORAIS_RULES"); env && *env) rules_path = env;
  std::string time_path;
  std::string frozen;
  app.add_option("--port", port, "Listen port (or $MEMORAIS_PORT)");
  app.add_option("--host", host, "Listen address");
  app.add_option("--rules", rules_path, "Rule catalog (default: embedded)");
  app.add_option("--time-defaults", time_path, "Time defaults document");
  app.add_option("--frozen-dtstamp", frozen, "Fixed DTSTAMP, YYYY-MM-DDTHH:MM:SSZ");
  CLI11_PARSE(app, argc, argv);

  memorais::ServiceOptions opts;
  try {
    if (!rules_path.empty()) opts.rules = memorais::load_ruleset(read_file(rules_path));
    if (!time_path.empty()) opts.time = memorais::load_time_defaults(read_file(time_path));
    if (!frozen.empty()) opts.frozen_dtstamp = memorais::parse_utc_timestamp(frozen);
  } catch (const std::exception& e) {
    std::cerr << "startup failed: " << e.what() << "\n";
    return 2;
  }

  memorais::ReminderService service(std::move(opts));
  httplib::Server server;
  service.mount(server);
  std::cerr << "memorais-server listening on " << host << ":" << port
            << " (ruleset " << service.rules().version << ")\n";
  if (!server.listen(host, port)) {
    std::cerr << "cannot listen on " << host << ":" << port << "\n";
    return 1;
  }
  return 0;
}
