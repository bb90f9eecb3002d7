#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>

namespace mise {

// Session time is integer milliseconds since session start. Thresholds such
// as the 5 s idle timeout compare exactly.
using SessionTime = std::chrono::milliseconds;

inline SessionTime from_seconds(double seconds) {
  return SessionTime{static_cast<std::int64_t>(std::llround(seconds * 1000.0))};
}

inline double to_seconds(SessionTime t) { return static_cast<double>(t.count()) / 1000.0; }

class Clock {
 public:
  virtual ~Clock() = default;
  virtual SessionTime now() const = 0;
};

class SimulatedClock final : public Clock {
 public:
  SessionTime now() const override { return now_; }

  // Never moves backwards; earlier targets are ignored.
  void advance_to(SessionTime t) {
    if (t > now_) now_ = t;
  }
  void advance_by(SessionTime dt) { now_ += dt; }

 private:
  SessionTime now_{0};
};

class SteadyClock final : public Clock {
 public:
  SteadyClock() : origin_(std::chrono::steady_clock::now()) {}

  SessionTime now() const override {
    return std::chrono::duration_cast<SessionTime>(std::chrono::steady_clock::now() - origin_);
  }

 private:
  std::chrono::steady_clock::time_point origin_;
};

}  // namespace mise
