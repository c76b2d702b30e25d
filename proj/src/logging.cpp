#include "mrfe/logging.hpp"

#include <cstdlib>
#include <string>

namespace mrfe::logging {

Level level() {
  static const Level cached = [] {
    const char* env = std::getenv("MRFE_LOG");
    if (env == nullptr) return Level::Info;
    const std::string v(env);
    if (v == "quiet" || v == "0") return Level::Quiet;
    if (v == "debug" || v == "2") return Level::Debug;
    return Level::Info;
  }();
  return cached;
}

}  // namespace mrfe::logging
