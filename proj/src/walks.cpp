#include "hcube/walks.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hcube {

std::string_view to_string(WalkKind kind) {
  return kind == WalkKind::Periodic ? "periodic" : "aperiodic";
}

WalkKind parse_walk_kind(std::string_view name) {
  if (name == "periodic") return WalkKind::Periodic;
  if (name == "aperiodic") return WalkKind::Aperiodic;
  throw std::invalid_argument("unknown walk kind '" + std::string(name) + "'");
}

Step WalkEngine::step() {
  const unsigned j = rng_.next_coordinate(state_.dimension());
  if (kind_ == WalkKind::Periodic) {
    state_.spin_in_place(j);
  } else {
    state_.set(j, rng_.next_sign() > 0);
  }
  ++time_;
  last_index_ = j;
  return {state_, j};
}

CoupledPair::CoupledPair(WalkKind kind, Vertex a, Vertex b, RngStream rng)
    : kind_(kind), a_(a), b_(b), rng_(rng) {
  if (a.dimension() != b.dimension()) {
    throw std::invalid_argument("coupled walks need equal dimensions");
  }
}

unsigned CoupledPair::step() {
  const unsigned j = rng_.next_coordinate(a_.dimension());
  if (kind_ == WalkKind::Periodic) {
    a_.spin_in_place(j);
    b_.spin_in_place(j);
  } else {
    const bool plus = rng_.next_sign() > 0;
    a_.set(j, plus);
    b_.set(j, plus);
  }
  ++time_;
  return j;
}

std::uint64_t default_meeting_cap(unsigned n) {
  const double cap = std::ceil(64.0 * n * std::log(static_cast<double>(n)));
  return cap < 64.0 ? 64 : static_cast<std::uint64_t>(cap);
}

StopTime meeting_time(unsigned n, RngStream rng, std::uint64_t cap) {
  if (cap < 1) throw std::invalid_argument("meeting_time: cap must be >= 1");
  CoupledPair pair(WalkKind::Aperiodic, all_plus(n), all_minus(n), rng);
  while (pair.time() < cap) {
    pair.step();
    if (pair.a() == pair.b()) return StopTime::observed(pair.time());
  }
  return StopTime::censored_at(cap);
}

}  // namespace hcube
