#pragma once

#include <chrono>

namespace mrfe {

/// Monotonic wall-clock stopwatch, seconds.
class Stopwatch {
 public:
  Stopwatch() : start_(clock::now()) {}
  double elapsed() const {
    return std::chrono::duration<double>(clock::now() - start_).count();
  }
  void restart() { start_ = clock::now(); }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_;
};

}  // namespace mrfe
