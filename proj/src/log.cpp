#include "fsmlp/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace fsmlp::log {
namespace {

Level initial_level() {
  if (const char* env = std::getenv("FSMLP_LOG")) {
    const std::string v(env);
    if (v == "quiet") return Level::kQuiet;
    if (v == "info") return Level::kInfo;
  }
  return Level::kWarn;
}

std::atomic<Level>& current() {
  static std::atomic<Level> lvl{initial_level()};
  return lvl;
}

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void set_level(Level level) { current().store(level); }
Level level() { return current().load(); }

void warn(std::string_view message) {
  if (level() < Level::kWarn) return;
  std::lock_guard lock(sink_mutex());
  std::cerr << "[fsmlp] warning: " << message << '\n';
}

void info(std::string_view message) {
  if (level() < Level::kInfo) return;
  std::lock_guard lock(sink_mutex());
  std::cerr << "[fsmlp] " << message << '\n';
}

}  // namespace fsmlp::log
