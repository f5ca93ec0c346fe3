#include "hcube/vertex.hpp"

#include <stdexcept>

namespace hcube {

namespace {

void check_dimension(unsigned n) {
  if (n < 1 || n > kMaxDimension) {
    throw std::invalid_argument("dimension must be in [1, " + std::to_string(kMaxDimension) + "], got " + std::to_string(n));
  }
}

Vertex::Words full_mask(unsigned n) {
  Vertex::Words mask{};
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const unsigned lo = static_cast<unsigned>(64 * i);
    if (n >= lo + 64) {
      mask[i] = ~0ull;
    } else if (n > lo) {
      mask[i] = ~0ull >> (64 - (n - lo));
    }
  }
  return mask;
}

}  // namespace

Vertex::Vertex(unsigned n) : n_(n), words_{} { check_dimension(n); }

Vertex Vertex::all_plus(unsigned n) {
  check_dimension(n);
  return Vertex(n, full_mask(n));
}

Vertex Vertex::all_minus(unsigned n) { return Vertex(n); }

Vertex Vertex::from_words(unsigned n, const Words& words) {
  check_dimension(n);
  const Words mask = full_mask(n);
  for (std::size_t i = 0; i < words.size(); ++i) {
    if ((words[i] & ~mask[i]) != 0) throw std::invalid_argument("bits set above dimension");
  }
  return Vertex(n, words);
}

void Vertex::check_index(unsigned j) const {
  if (j >= n_) {
    throw std::out_of_range("coordinate " + std::to_string(j) + " out of range for dimension " +
                            std::to_string(n_));
  }
}

int Vertex::coordinate(unsigned j) const { return is_plus(j) ? +1 : -1; }

bool Vertex::is_plus(unsigned j) const {
  check_index(j);
  return (words_[j >> 6] >> (j & 63)) & 1u;
}

Vertex Vertex::spun(unsigned j) const {
  Vertex out = *this;
  out.spin_in_place(j);
  return out;
}

void Vertex::spin_in_place(unsigned j) {
  check_index(j);
  words_[j >> 6] ^= 1ull << (j & 63);
}

void Vertex::set(unsigned j, bool plus) {
  check_index(j);
  const std::uint64_t bit = 1ull << (j & 63);
  if (plus) {
    words_[j >> 6] |= bit;
  } else {
    words_[j >> 6] &= ~bit;
  }
}

std::string Vertex::to_string() const {
  std::string s(n_, '-');
  for (unsigned j = 0; j < n_; ++j) {
    if (is_plus(j)) s[j] = '+';
  }
  return s;
}

unsigned hamming(const Vertex& a, const Vertex& b) {
  if (a.dimension() != b.dimension()) {
    throw std::invalid_argument("hamming: dimension mismatch (" + std::to_string(a.dimension()) +
                                " vs " + std::to_string(b.dimension()) + ")");
  }
  unsigned d = 0;
  for (std::size_t i = 0; i < kVertexWords; ++i) {
    d += static_cast<unsigned>(std::popcount(a.word(i) ^ b.word(i)));
  }
  return d;
}

}  // namespace hcube
