#include "anbx/scheduler/clock.hpp"

namespace anbx::scheduler {

ManualClock::time_point ManualClock::now() const {
  std::lock_guard lock(mu_);
  return now_;
}

void ManualClock::advance(duration d) {
  std::lock_guard lock(mu_);
  now_ += d;
}

}  // namespace anbx::scheduler
