#pragma once

#include <iostream>
#include <string_view>

namespace hardrank::log {

enum class Level { quiet = 0, warn = 1, info = 2 };

Level level();
void set_level(Level lvl);

void warn(std::string_view msg);
void info(std::string_view msg);

} // namespace hardrank::log
