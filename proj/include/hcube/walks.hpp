#pragma once

#include <cstdint>
#include <string_view>

#include "hcube/rng.hpp"
#include "hcube/stop_time.hpp"
#include "hcube/vertex.hpp"

namespace hcube {

enum class WalkKind {
  Periodic,   // flips the chosen coordinate every step
  Aperiodic,  // sets the chosen coordinate to a fair random sign (lazy)
};

std::string_view to_string(WalkKind kind);
/// Accepts "periodic" / "aperiodic"; throws std::invalid_argument otherwise.
WalkKind parse_walk_kind(std::string_view name);

struct Step {
  Vertex state;
  unsigned index;
};

/// A single walk on the hypercube driven by its own random stream.
///
/// Each periodic step draws one coordinate. Each aperiodic step draws one
/// coordinate and then one sign, even when the sign leaves the state
/// unchanged, so the number of stream advances per step is fixed by the kind.
class WalkEngine {
 public:
  WalkEngine(WalkKind kind, Vertex start, RngStream rng)
      : kind_(kind), state_(start), rng_(rng) {}

  Step step();

  WalkKind kind() const noexcept { return kind_; }
  const Vertex& state() const noexcept { return state_; }
  std::uint64_t time() const noexcept { return time_; }
  /// Coordinate chosen at the most recent step; meaningless at time 0.
  unsigned last_index() const noexcept { return last_index_; }
  RngStream& rng() noexcept { return rng_; }

 private:
  WalkKind kind_;
  Vertex state_;
  RngStream rng_;
  std::uint64_t time_ = 0;
  unsigned last_index_ = 0;
};

/// Two walks driven by one shared stream.
///
/// Aperiodic: both walks receive the same (coordinate, sign), so once a
/// coordinate agrees it agrees forever. Periodic: both walks flip the same
/// coordinate; this variant is not a contracting coupling and keeps the
/// distance constant.
class CoupledPair {
 public:
  CoupledPair(WalkKind kind, Vertex a, Vertex b, RngStream rng);

  /// Advances both walks one step; returns the shared coordinate.
  unsigned step();

  WalkKind kind() const noexcept { return kind_; }
  const Vertex& a() const noexcept { return a_; }
  const Vertex& b() const noexcept { return b_; }
  std::uint64_t time() const noexcept { return time_; }
  unsigned dimension() const noexcept { return a_.dimension(); }

  unsigned disagreements() const { return hamming(a_, b_); }
  /// D(t) = hamming(a, b) / n.
  double distance() const { return static_cast<double>(disagreements()) / dimension(); }

 private:
  WalkKind kind_;
  Vertex a_;
  Vertex b_;
  RngStream rng_;
  std::uint64_t time_ = 0;
};

/// Default meeting-time cap: ceil(64 n ln n), at least 64.
std::uint64_t default_meeting_cap(unsigned n);

/// First t > 0 at which the coupled aperiodic walks started from all_plus and
/// all_minus coincide; censored at cap.
StopTime meeting_time(unsigned n, RngStream rng, std::uint64_t cap);

}  // namespace hcube
