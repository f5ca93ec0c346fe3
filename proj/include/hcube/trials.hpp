#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "hcube/rng.hpp"
#include "hcube/stop_time.hpp"

namespace hcube {

/// One stopping-time sample.
struct TrialRecord {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;  // derive_trial_seed(master, trial)
  StopTime outcome;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

inline unsigned default_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs `sample(trial)` for trial = 0..trials-1 on `jobs` threads. Results
/// are stored by trial index, so the output never depends on scheduling.
/// The first exception thrown by a worker is rethrown.
template <class Result, class Sampler>
std::vector<Result> run_parallel(std::size_t trials, unsigned jobs, Sampler&& sample) {
  std::vector<Result> out(trials);
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(trials, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < trials; ++i) out[i] = sample(static_cast<std::uint64_t>(i));
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= trials) return;
      try {
        out[i] = sample(static_cast<std::uint64_t>(i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(trials);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(jobs);
  for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// Stopping-time trials with per-trial seeds derived from `master`.
template <class Sampler>
std::vector<TrialRecord> run_trials(std::uint64_t master, std::size_t trials, unsigned jobs,
                                    Sampler&& sample) {
  return run_parallel<TrialRecord>(trials, jobs, [&](std::uint64_t i) {
    return TrialRecord{i, derive_trial_seed(master, i), sample(i)};
  });
}

}  // namespace hcube
