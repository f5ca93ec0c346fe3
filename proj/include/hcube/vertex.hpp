#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

namespace hcube {

/// Largest supported hypercube dimension (four 64-bit words).
inline constexpr unsigned kMaxDimension = 256;
inline constexpr std::size_t kVertexWords = kMaxDimension / 64;

/// A vertex of {-1,+1}^n stored as a bit vector: bit i set <=> coordinate i is +1.
///
/// Coordinates are 0-based. Bits at positions >= n are always zero, so two
/// vertices of equal dimension compare equal exactly when their words do.
class Vertex {
 public:
  /// All coordinates -1.
  explicit Vertex(unsigned n);

  static Vertex all_plus(unsigned n);
  static Vertex all_minus(unsigned n);
  using Words = std::array<std::uint64_t, kVertexWords>;

  /// Builds a vertex from raw words (word 0 holds coordinates 0..63); bits
  /// above n must be clear.
  static Vertex from_words(unsigned n, const Words& words);
  static Vertex from_words(unsigned n, std::uint64_t lo, std::uint64_t hi = 0) {
    return from_words(n, Words{lo, hi});
  }

  unsigned dimension() const noexcept { return n_; }
  std::uint64_t word(std::size_t i) const noexcept { return words_[i]; }
  const Words& words() const noexcept { return words_; }

  /// +1 or -1.
  int coordinate(unsigned j) const;
  bool is_plus(unsigned j) const;

  /// Copy differing from *this exactly at coordinate j.
  Vertex spun(unsigned j) const;
  void spin_in_place(unsigned j);
  /// Sets coordinate j to +1 (plus = true) or -1.
  void set(unsigned j, bool plus);

  /// Number of +1 coordinates.
  unsigned weight() const noexcept {
    unsigned w = 0;
    for (std::uint64_t x : words_) w += static_cast<unsigned>(std::popcount(x));
    return w;
  }

  /// "+-+..." with coordinate 0 first.
  std::string to_string() const;

  friend bool operator==(const Vertex&, const Vertex&) = default;

 private:
  Vertex(unsigned n, const Words& words) : n_(n), words_(words) {}
  void check_index(unsigned j) const;

  unsigned n_;
  Words words_;
};

inline Vertex all_plus(unsigned n) { return Vertex::all_plus(n); }
inline Vertex all_minus(unsigned n) { return Vertex::all_minus(n); }

/// spin(v, j): flip coordinate j. Throws std::out_of_range for j >= v.dimension().
inline Vertex spin(const Vertex& v, unsigned j) { return v.spun(j); }

/// Number of coordinates where a and b differ. Throws std::invalid_argument
/// on dimension mismatch.
unsigned hamming(const Vertex& a, const Vertex& b);

struct VertexHash {
  std::size_t operator()(const Vertex& v) const noexcept {
    std::uint64_t h = 0;
    for (std::uint64_t x : v.words()) {
      h = (h ^ (x + 0x632BE59BD9B4E019ull)) * 0x9E3779B97F4A7C15ull;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace hcube

template <>
struct std::hash<hcube::Vertex> : hcube::VertexHash {};
