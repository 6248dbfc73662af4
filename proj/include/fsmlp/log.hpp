#pragma once

#include <string_view>

namespace fsmlp::log {

enum class Level { kQuiet = 0, kWarn = 1, kInfo = 2 };

void set_level(Level level);
Level level();

void warn(std::string_view message);
void info(std::string_view message);

}  // namespace fsmlp::log
