#pragma once

#include <iostream>
#include <string>

namespace mrfe::logging {

enum class Level { Quiet = 0, Info = 1, Debug = 2 };

/// Verbosity from the MRFE_LOG environment variable: quiet|info|debug.
/// Defaults to info.
Level level();

inline bool enabled(Level l) { return static_cast<int>(l) <= static_cast<int>(level()); }

inline void info(const std::string& msg) {
  if (enabled(Level::Info)) std::cerr << "[mrfe] " << msg << "\n";
}

inline void debug(const std::string& msg) {
  if (enabled(Level::Debug)) std::cerr << "[mrfe:debug] " << msg << "\n";
}

}  // namespace mrfe::logging
