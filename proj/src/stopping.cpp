#include "hcube/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hcube {

namespace {

constexpr std::uint64_t kPilotTag = 0x70696C6F74536565ull;
constexpr std::uint64_t kMembershipTag = 0x4D656D6265725365ull;
constexpr double kMaxCap = 4611686018427387904.0;  // 2^62

std::uint64_t clamp_cap(double cap) {
  if (cap >= kMaxCap) return static_cast<std::uint64_t>(kMaxCap);
  return static_cast<std::uint64_t>(std::ceil(cap));
}

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("gamma must lie in (0, 1), got " + std::to_string(gamma));
  }
}

bool in_path(const std::vector<Vertex>& path, const Vertex& v) {
  return std::find(path.begin(), path.end(), v) != path.end();
}

}  // namespace

unsigned path_length(unsigned n, double gamma) {
  double m = std::floor(std::pow(static_cast<double>(n), gamma));
  // pow(16, 0.5) may come back as 3.999...; accept m + 1 if it is within rounding.
  if (std::pow(m + 1.0, 1.0 / gamma) <= static_cast<double>(n) * (1.0 + 1e-12)) m += 1.0;
  return static_cast<unsigned>(m);
}

void PathReturnConfig::validate() const {
  if (n < 1 || n > kMaxDimension) throw std::invalid_argument("n must be in [1, " + std::to_string(kMaxDimension) + "]");
  check_gamma(gamma);
  if (m() < 1) throw std::invalid_argument("path length floor(n^gamma) must be >= 1");
  if (cap != 0 && cap <= m()) throw std::invalid_argument("cap must exceed the path length");
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("delta must lie in (0, 1/2)");
}

std::uint64_t PathReturnConfig::effective_cap() const {
  return cap != 0 ? cap : default_path_return_cap(n, m());
}

std::uint64_t default_path_return_cap(unsigned n, unsigned m) {
  return clamp_cap(64.0 * std::ldexp(1.0, static_cast<int>(n)) / (m + 1.0));
}

PathReturnSample sample_path_return(const PathReturnConfig& config, std::uint64_t trial) {
  const unsigned m = config.m();
  const std::uint64_t cap = config.effective_cap();
  WalkEngine walk(config.walk_kind, all_plus(config.n),
                  RngStream(derive_trial_seed(config.master_seed, trial)));

  std::vector<Vertex> path{walk.state()};
  for (unsigned t = 1; t <= m; ++t) {
    const Vertex& v = walk.step().state;
    if (!in_path(path, v)) path.push_back(v);
  }

  bool exited = config.rule == ReturnRule::Literal;
  while (walk.time() < cap) {
    const Vertex& v = walk.step().state;
    if (in_path(path, v)) {
      if (exited) return {StopTime::observed(walk.time()), path.size()};
    } else {
      exited = true;
    }
  }
  return {StopTime::censored_at(cap), path.size()};
}

StopTime sample_eta_visit(const PathReturnConfig& config, const Vertex& eta, std::uint64_t trial) {
  if (eta.dimension() != config.n) throw std::invalid_argument("eta has the wrong dimension");
  const unsigned m = config.m();
  const std::uint64_t cap = config.effective_cap();
  CoupledPair pair(config.walk_kind, all_plus(config.n), eta,
                   RngStream(derive_trial_seed(config.master_seed, trial)));

  std::vector<Vertex> path{pair.a()};
  std::vector<Vertex> early;  // eta-walk states at times 1..m, checked once V is known
  early.reserve(m);
  for (unsigned t = 1; t <= m; ++t) {
    pair.step();
    if (!in_path(path, pair.a())) path.push_back(pair.a());
    early.push_back(pair.b());
  }
  if (in_path(path, eta)) {
    throw std::invalid_argument("sample_eta_visit: eta " + eta.to_string() +
                                " lies on the initial path V");
  }
  for (unsigned t = 1; t <= m; ++t) {
    if (t > cap) return StopTime::censored_at(cap);
    if (in_path(path, early[t - 1])) return StopTime::observed(t);
  }
  while (pair.time() < cap) {
    pair.step();
    if (in_path(path, pair.b())) return StopTime::observed(pair.time());
  }
  return StopTime::censored_at(cap);
}

std::uint64_t empirical_beta(std::span<const StopTime> samples) {
  if (samples.empty()) throw std::domain_error("empirical_beta: no samples");
  const std::size_t n = samples.size();
  // Largest k with k / n <= 1/e; beta is one past the (k+1)-th largest value.
  const auto k = static_cast<std::size_t>(std::floor(static_cast<double>(n) * std::exp(-1.0)));
  std::vector<std::uint64_t> observed;
  std::size_t censored = 0;
  for (const auto& s : samples) {
    if (s.censored) {
      ++censored;
    } else {
      observed.push_back(s.value);
    }
  }
  if (censored == n) {
    throw std::domain_error("empirical_beta: every pilot sample is censored; increase the cap");
  }
  if (censored > k) {
    throw std::domain_error("empirical_beta: too many censored pilot samples (" +
                            std::to_string(censored) + "); increase the cap");
  }
  std::sort(observed.begin(), observed.end(), std::greater<>());
  return observed[k - censored] + 1;
}

std::uint64_t pilot_seed_for(std::uint64_t master_seed) { return mix64(master_seed ^ kPilotTag); }

BetaEstimate estimate_beta(const PathReturnConfig& config) {
  config.validate();
  if (config.pilot_trials < 500) throw std::invalid_argument("estimate_beta: need >= 500 pilot trials");
  PathReturnConfig pilot = config;
  pilot.master_seed = pilot_seed_for(config.master_seed);
  std::vector<StopTime> samples;
  samples.reserve(config.pilot_trials);
  for (std::size_t i = 0; i < config.pilot_trials; ++i) {
    samples.push_back(sample_path_return(pilot, i).r);
  }
  return {empirical_beta(samples), config.pilot_trials, pilot.master_seed};
}

RandomSetMembership::RandomSetMembership(double p, RngStream rng) : p_(p), rng_(rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("inclusion probability must be in [0, 1]");
}

bool RandomSetMembership::contains(const Vertex& v) {
  auto it = memo_.find(v);
  if (it != memo_.end()) return it->second;
  const bool member = rng_.bernoulli(p_);
  memo_.emplace(v, member);
  return member;
}

std::optional<bool> RandomSetMembership::known(const Vertex& v) const {
  auto it = memo_.find(v);
  if (it == memo_.end()) return std::nullopt;
  return it->second;
}

void ThetaConfig::validate() const {
  if (n < 1 || n > kMaxDimension) throw std::invalid_argument("n must be in [1, " + std::to_string(kMaxDimension) + "]");
  check_gamma(gamma);
  if (inclusion_prob && !(*inclusion_prob > 0.0 && *inclusion_prob <= 1.0)) {
    throw std::invalid_argument("inclusion probability must be in (0, 1]");
  }
}

double ThetaConfig::p() const {
  return inclusion_prob ? *inclusion_prob : std::pow(static_cast<double>(n), -gamma);
}

std::uint64_t ThetaConfig::effective_cap() const {
  return cap != 0 ? cap : default_theta_cap(n, gamma);
}

std::uint64_t default_theta_cap(unsigned n, double gamma) {
  return clamp_cap(64.0 * std::pow(static_cast<double>(n), gamma));
}

ThetaSample hitting_time(WalkEngine& walk, RandomSetMembership& set, std::uint64_t cap) {
  ThetaSample out;
  out.start_in_set = set.contains(walk.state());
  const std::uint64_t t0 = walk.time();
  while (walk.time() - t0 < cap) {
    if (set.contains(walk.step().state)) {
      out.theta = StopTime::observed(walk.time() - t0);
      return out;
    }
  }
  out.theta = StopTime::censored_at(cap);
  return out;
}

ThetaSample sample_theta(const ThetaConfig& config, std::uint64_t trial) {
  const std::uint64_t seed = derive_trial_seed(config.master_seed, trial);
  RandomSetMembership set(config.p(), RngStream(mix64(seed ^ kMembershipTag)));
  WalkEngine walk(config.walk_kind, all_plus(config.n), RngStream(seed));
  return hitting_time(walk, set, config.effective_cap());
}

std::vector<ThetaSample> sample_theta_shared_set(const ThetaConfig& config, std::uint64_t batch,
                                                 std::size_t walks) {
  const std::uint64_t batch_seed = derive_trial_seed(config.master_seed, batch);
  RandomSetMembership set(config.p(), RngStream(mix64(batch_seed ^ kMembershipTag)));
  const std::uint64_t cap = config.effective_cap();
  std::vector<ThetaSample> out;
  out.reserve(walks);
  for (std::size_t k = 0; k < walks; ++k) {
    WalkEngine walk(config.walk_kind, all_plus(config.n), RngStream(derive_trial_seed(batch_seed, k)));
    out.push_back(hitting_time(walk, set, cap));
  }
  return out;
}

}  // namespace hcube
