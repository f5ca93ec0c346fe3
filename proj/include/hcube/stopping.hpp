#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "hcube/rng.hpp"
#include "hcube/stop_time.hpp"
#include "hcube/vertex.hpp"
#include "hcube/walks.hpp"

namespace hcube {

/// floor(n^gamma), guarded against pow() landing just below an integer.
unsigned path_length(unsigned n, double gamma);

/// How the return to the initial path is counted after time m.
enum class ReturnRule {
  Literal,         // first t > m with state(t) in V
  AfterFirstExit,  // first t > m with state(t) in V after the walk has left V
};

struct PathReturnConfig {
  unsigned n = 12;
  double gamma = 0.5;
  WalkKind walk_kind = WalkKind::Periodic;
  ReturnRule rule = ReturnRule::Literal;
  std::uint64_t cap = 0;  // 0: default_path_return_cap
  std::size_t trials = 2000;
  std::size_t pilot_trials = 2000;
  std::uint64_t master_seed = 1;
  double delta = 0.25;  // exponent slack used by the N^(1+delta) lower-bound check

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
  unsigned m() const { return path_length(n, gamma); }
  std::uint64_t effective_cap() const;
};

/// ceil(64 * 2^n / (m + 1)), clamped to 2^62.
std::uint64_t default_path_return_cap(unsigned n, unsigned m);

struct PathReturnSample {
  StopTime r;
  std::size_t v_size = 0;  // distinct states in V = {state(0), ..., state(m)}
};

/// R_N for trial `trial`: walk from all_plus, V is its own path up to time m,
/// R_N is the first t > m at which the walk is back in V.
PathReturnSample sample_path_return(const PathReturnConfig& config, std::uint64_t trial);

/// R^eta_N: first t > 0 at which a walk from `eta`, coupled to the all_plus
/// walk through the trial's shared stream, enters that walk's path V.
/// Throws std::invalid_argument if eta is in V.
StopTime sample_eta_visit(const PathReturnConfig& config, const Vertex& eta, std::uint64_t trial);

/// Smallest integer t with #{R >= t} / total <= 1/e. Censored samples count as
/// exceeding every t up to the cap. Throws std::domain_error if censoring
/// makes the quantile undeterminable (including the all-censored case).
std::uint64_t empirical_beta(std::span<const StopTime> samples);

struct BetaEstimate {
  std::uint64_t beta_hat = 0;
  std::size_t pilot_trials = 0;
  std::uint64_t pilot_seed = 0;
};

/// Master seed used for the pilot run; disjoint from the evaluation seeds.
std::uint64_t pilot_seed_for(std::uint64_t master_seed);

/// Runs `config.pilot_trials` (>= 500) path-return trials under the pilot
/// seed and returns the empirical beta. Deterministic in config.
BetaEstimate estimate_beta(const PathReturnConfig& config);

/// Lazily sampled random vertex set: each vertex is a member independently
/// with probability p. A vertex's membership is drawn the first time it is
/// queried and memoized.
class RandomSetMembership {
 public:
  RandomSetMembership(double p, RngStream rng);

  bool contains(const Vertex& v);
  double inclusion_prob() const noexcept { return p_; }
  std::size_t draws() const noexcept { return memo_.size(); }
  /// Membership if already drawn.
  std::optional<bool> known(const Vertex& v) const;

 private:
  double p_;
  RngStream rng_;
  std::unordered_map<Vertex, bool> memo_;
};

struct ThetaConfig {
  unsigned n = 32;
  double gamma = 0.5;
  WalkKind walk_kind = WalkKind::Periodic;
  std::uint64_t cap = 0;  // 0: default_theta_cap
  std::uint64_t master_seed = 1;
  std::optional<double> inclusion_prob;  // overrides n^-gamma

  void validate() const;
  double p() const;
  std::uint64_t effective_cap() const;
};

/// ceil(64 n^gamma).
std::uint64_t default_theta_cap(unsigned n, double gamma);

struct ThetaSample {
  StopTime theta;
  bool start_in_set = false;
};

/// Theta = min(t > 0 : state(t) in M). The start vertex's membership is drawn
/// and reported but does not stop the walk at t = 0.
ThetaSample hitting_time(WalkEngine& walk, RandomSetMembership& set, std::uint64_t cap);

/// One trial with a fresh random set M, walking from all_plus.
ThetaSample sample_theta(const ThetaConfig& config, std::uint64_t trial);

/// `walks` independent walks from all_plus that share one random set M
/// (batch `batch`); used to look at the spread of P(Theta > s | M) over M.
std::vector<ThetaSample> sample_theta_shared_set(const ThetaConfig& config, std::uint64_t batch,
                                                 std::size_t walks);

}  // namespace hcube
