#pragma once

#include <chrono>
#include <mutex>

namespace anbx::scheduler {

/// Time source for task timing and timeouts.
class Clock {
 public:
  using time_point = std::chrono::steady_clock::time_point;
  using duration = std::chrono::steady_clock::duration;

  virtual ~Clock() = default;
  virtual time_point now() const = 0;
};

class SteadyClock final : public Clock {
 public:
  time_point now() const override { return std::chrono::steady_clock::now(); }
};

/// Clock that only moves when told to.
class ManualClock final : public Clock {
 public:
  time_point now() const override;
  void advance(duration d);

 private:
  mutable std::mutex mu_;
  time_point now_{};
};

}  // namespace anbx::scheduler
