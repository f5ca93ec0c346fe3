#pragma once

#include <cstdint>

namespace hcube {

/// Outcome of a capped stopping-time simulation. A censored outcome means the
/// event was not observed by step `value` (the cap).
struct StopTime {
  std::uint64_t value = 0;
  bool censored = false;

  static StopTime observed(std::uint64_t t) { return {t, false}; }
  static StopTime censored_at(std::uint64_t cap) { return {cap, true}; }

  friend bool operator==(const StopTime&, const StopTime&) = default;
};

}  // namespace hcube
