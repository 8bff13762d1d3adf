#include "hardrank/log.hpp"

#include <atomic>
#include <mutex>

namespace hardrank::log {

namespace {
std::atomic<Level> g_level{Level::warn};
std::mutex g_mutex;
} // namespace

Level level() { return g_level.load(); }
void set_level(Level lvl) { g_level.store(lvl); }

void warn(std::string_view msg)
{
    if (level() < Level::warn) return;
    std::lock_guard lock(g_mutex);
    std::cerr << "warning: " << msg << '\n';
}

void info(std::string_view msg)
{
    if (level() < Level::info) return;
    std::lock_guard lock(g_mutex);
    std::cerr << msg << '\n';
}

} // namespace hardrank::log
