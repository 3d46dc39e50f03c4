#include "vortex/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace vortex::log {

namespace {

Level from_env() {
  const char* env = std::getenv("VORTEX_PLATEAU_LOG");
  return env ? parse_level(env) : Level::Warn;
}

std::atomic<int>& current() {
  static std::atomic<int> value{static_cast<int>(from_env())};
  return value;
}

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Level level() { return static_cast<Level>(current().load()); }

void set_level(Level l) { current().store(static_cast<int>(l)); }

Level parse_level(std::string_view name) {
  if (name == "error") return Level::Error;
  if (name == "info") return Level::Info;
  if (name == "debug") return Level::Debug;
  return Level::Warn;
}

void write(Level l, std::string_view message) {
  if (static_cast<int>(l) > current().load()) return;
  static const char* tags[] = {"error", "warn", "info", "debug"};
  std::lock_guard lock(sink_mutex());
  std::cerr << '[' << tags[static_cast<int>(l)] << "] " << message << '\n';
}

}  // namespace vortex::log
