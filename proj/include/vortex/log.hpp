#pragma once

// Minimal stderr logger. The level comes from VORTEX_PLATEAU_LOG
// (error, warn, info, debug); default warn.

#include <string_view>

namespace vortex::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

Level level();
void set_level(Level l);
/// Parses a level name; unknown names give Warn.
Level parse_level(std::string_view name);

void write(Level l, std::string_view message);

inline void error(std::string_view m) { write(Level::Error, m); }
inline void warn(std::string_view m) { write(Level::Warn, m); }
inline void info(std::string_view m) { write(Level::Info, m); }
inline void debug(std::string_view m) { write(Level::Debug, m); }

}  // namespace vortex::log
