#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "hcube/stop_time.hpp"
#include "hcube/vertex.hpp"
#include "hcube/walks.hpp"

namespace hcube {

/// A word of coordinate indices (i_1, ..., i_2l), 0-based, each < kMaxDimension.
using IndexWord = std::span<const unsigned>;

/// 1 iff every value occurring in x occurs an even number of times, i.e. the
/// composition of the spins along x maps every vertex to itself.
/// Throws std::invalid_argument for empty or odd-length words.
bool f2l(IndexWord x);

/// 1 iff no even-length contiguous window x[j..j+2k-1] other than the full
/// word has all-even counts (no earlier return inside the word).
/// Only defined for |x| = 2l with l >= 2.
bool h2l(IndexWord x);

/// Indicator of membership in J_l: f2l for l = 1, f2l * h2l for l > 1.
bool g2l(IndexWord x);

/// Enumeration refuses n^(2l) above this bound.
inline constexpr std::uint64_t kMaxEnumeratedWords = 100'000'000;

/// Exact |J_l| by scanning {0..n-1}^(2l) in lexicographic order. If `visit`
/// is set it receives every member word. Throws std::length_error when n^(2l)
/// exceeds kMaxEnumeratedWords.
std::uint64_t enumerate_jl(unsigned n, unsigned l,
                           const std::function<void(IndexWord)>& visit = {});

/// Writes one line per member of J_l (space-separated 0-based indices) and a
/// trailing "count <|J_l|>" line. Returns the count.
std::uint64_t write_jl_certificate(std::ostream& out, unsigned n, unsigned l);

struct FiredReturn {
  unsigned l;
  std::uint64_t time;
  friend bool operator==(const FiredReturn&, const FiredReturn&) = default;
};

/// Online detector of the first 2l-step return times Gamma_l, l = 1..l_max,
/// fed with the coordinate indices I(1), I(2), ... of a periodic walk.
class ReturnDetector {
 public:
  explicit ReturnDetector(unsigned l_max);

  /// Feeds I(t). Returns the (l, t) pairs whose first hit happened at t.
  std::vector<FiredReturn> feed(unsigned index, std::uint64_t t);

  unsigned l_max() const noexcept { return l_max_; }
  std::optional<std::uint64_t> first_hit(unsigned l) const;
  /// min over fired l of Gamma_l, if any fired.
  std::optional<std::uint64_t> earliest_hit() const;
  std::size_t window_size() const noexcept { return filled_; }

 private:
  unsigned l_max_;
  std::vector<unsigned> ring_;
  std::size_t head_ = 0;  // next write position
  std::size_t filled_ = 0;
  std::vector<std::optional<std::uint64_t>> fired_;
  std::vector<unsigned> scratch_;
};

/// Vertices seen along one trajectory, with the time of their first visit.
class VisitedSet {
 public:
  /// Inserts v seen at time t. Returns the earlier visit time if v was
  /// already present (the set is left unchanged in that case).
  std::optional<std::uint64_t> visit(const Vertex& v, std::uint64_t t);
  bool contains(const Vertex& v) const { return first_seen_.contains(v); }
  std::size_t size() const noexcept { return first_seen_.size(); }

 private:
  std::unordered_map<Vertex, std::uint64_t> first_seen_;
};

struct SelfIntersection {
  StopTime time;
  /// S_N minus the earlier visit time it matched (always even for a periodic
  /// walk); 0 when censored.
  std::uint64_t loop_length = 0;
};

/// Default self-intersection cap: 64 n.
std::uint64_t default_selfint_cap(unsigned n);

/// S_N = min(t >= 2 : state(t) in {state(0), ..., state(t-1)}) for a periodic
/// walk. Throws std::invalid_argument for aperiodic engines.
SelfIntersection first_self_intersection(WalkEngine& engine, std::uint64_t cap);

/// Gamma_l for a single l on the index stream of `engine`; censored at cap.
StopTime first_return_time(WalkEngine& engine, unsigned l, std::uint64_t cap);

}  // namespace hcube
