#include "hcube/returns.hpp"

#include <cassert>
#include <ostream>
#include <stdexcept>
#include <string>

namespace hcube {

namespace {

using Parity = Vertex::Words;

void toggle(Parity& p, unsigned index) {
  if (index >= kMaxDimension) {
    throw std::invalid_argument("index word entry " + std::to_string(index) + " exceeds " + std::to_string(kMaxDimension - 1));
  }
  p[index >> 6] ^= 1ull << (index & 63);
}

void check_even_length(IndexWord x, const char* fn) {
  if (x.empty() || x.size() % 2 != 0) {
    throw std::invalid_argument(std::string(fn) + ": word length must be even and positive, got " +
                                std::to_string(x.size()));
  }
}

// prefix[i] = parity vector of x[0..i-1]; two prefixes agree exactly when the
// window between them has all-even counts.
std::vector<Parity> prefix_parities(IndexWord x) {
  std::vector<Parity> prefix(x.size() + 1, Parity{});
  for (std::size_t i = 0; i < x.size(); ++i) {
    prefix[i + 1] = prefix[i];
    toggle(prefix[i + 1], x[i]);
  }
  return prefix;
}

bool h_from_prefix(const std::vector<Parity>& prefix) {
  const std::size_t len = prefix.size() - 1;  // 2l
  for (std::size_t j = 1; j <= len; ++j) {
    const std::size_t k_max = (len + 1 - j) / 2;
    for (std::size_t k = 1; k <= k_max; ++k) {
      const std::size_t end = j + 2 * k - 1;
      assert(end <= len);
      if (j == 1 && end == len) continue;  // the full word itself
      if (prefix[j - 1] == prefix[end]) return false;
    }
  }
  return true;
}

}  // namespace

bool f2l(IndexWord x) {
  check_even_length(x, "f2l");
  Parity p{};
  for (unsigned i : x) toggle(p, i);
  return p[0] == 0 && p[1] == 0;
}

bool h2l(IndexWord x) {
  check_even_length(x, "h2l");
  if (x.size() < 4) throw std::invalid_argument("h2l: defined only for l >= 2");
  return h_from_prefix(prefix_parities(x));
}

bool g2l(IndexWord x) {
  check_even_length(x, "g2l");
  const auto prefix = prefix_parities(x);
  if (prefix.back() != Parity{}) return false;
  if (x.size() == 2) return true;
  return h_from_prefix(prefix);
}

std::uint64_t enumerate_jl(unsigned n, unsigned l, const std::function<void(IndexWord)>& visit) {
  if (n < 1 || n > kMaxDimension) throw std::invalid_argument("enumerate_jl: n must be in [1, " + std::to_string(kMaxDimension) + "]");
  if (l < 1) throw std::invalid_argument("enumerate_jl: l must be >= 1");
  const unsigned len = 2 * l;
  std::uint64_t total = 1;
  for (unsigned i = 0; i < len; ++i) {
    if (total > kMaxEnumeratedWords / n) {
      throw std::length_error("enumerate_jl: n^(2l) = " + std::to_string(n) + "^" +
                              std::to_string(len) + " exceeds the enumeration bound of " +
                              std::to_string(kMaxEnumeratedWords) + " words");
    }
    total *= n;
  }

  // Odometer over words with incrementally maintained prefix parities.
  std::vector<unsigned> word(len, 0);
  std::vector<Parity> prefix(len + 1, Parity{});
  for (unsigned i = 0; i < len; ++i) {
    prefix[i + 1] = prefix[i];
    toggle(prefix[i + 1], 0);
  }
  std::uint64_t count = 0;
  for (std::uint64_t w = 0; w < total; ++w) {
    if (prefix[len] == Parity{} && (len == 2 || h_from_prefix(prefix))) {
      ++count;
      if (visit) visit(IndexWord(word));
    }
    int pos = static_cast<int>(len) - 1;
    while (pos >= 0 && word[pos] == n - 1) {
      word[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++word[pos];
    for (unsigned i = static_cast<unsigned>(pos); i < len; ++i) {
      prefix[i + 1] = prefix[i];
      toggle(prefix[i + 1], word[i]);
    }
  }
  return count;
}

std::uint64_t write_jl_certificate(std::ostream& out, unsigned n, unsigned l) {
  const std::uint64_t count = enumerate_jl(n, l, [&out](IndexWord w) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out << ' ';
      out << w[i];
    }
    out << '\n';
  });
  out << "count " << count << '\n';
  return count;
}

ReturnDetector::ReturnDetector(unsigned l_max)
    : l_max_(l_max), ring_(2 * static_cast<std::size_t>(l_max)), fired_(l_max + 1) {
  if (l_max < 1) throw std::invalid_argument("ReturnDetector: l_max must be >= 1");
  scratch_.reserve(ring_.size());
}

std::vector<FiredReturn> ReturnDetector::feed(unsigned index, std::uint64_t t) {
  ring_[head_] = index;
  head_ = (head_ + 1) % ring_.size();
  if (filled_ < ring_.size()) ++filled_;

  std::vector<FiredReturn> fired;
  for (unsigned l = 1; l <= l_max_; ++l) {
    const std::size_t len = 2 * static_cast<std::size_t>(l);
    if (fired_[l] || filled_ < len) continue;
    scratch_.resize(len);
    for (std::size_t i = 0; i < len; ++i) {
      scratch_[i] = ring_[(head_ + ring_.size() - len + i) % ring_.size()];
    }
    if (g2l(IndexWord(scratch_))) {
      fired_[l] = t;
      fired.push_back({l, t});
    }
  }
  return fired;
}

std::optional<std::uint64_t> ReturnDetector::first_hit(unsigned l) const {
  if (l < 1 || l > l_max_) throw std::out_of_range("ReturnDetector: l outside [1, l_max]");
  return fired_[l];
}

std::optional<std::uint64_t> ReturnDetector::earliest_hit() const {
  std::optional<std::uint64_t> best;
  for (unsigned l = 1; l <= l_max_; ++l) {
    if (fired_[l] && (!best || *fired_[l] < *best)) best = fired_[l];
  }
  return best;
}

std::optional<std::uint64_t> VisitedSet::visit(const Vertex& v, std::uint64_t t) {
  auto [it, inserted] = first_seen_.try_emplace(v, t);
  if (inserted) return std::nullopt;
  return it->second;
}

std::uint64_t default_selfint_cap(unsigned n) { return 64ull * n; }

SelfIntersection first_self_intersection(WalkEngine& engine, std::uint64_t cap) {
  if (engine.kind() != WalkKind::Periodic) {
    throw std::invalid_argument("first_self_intersection: requires a periodic walk");
  }
  VisitedSet visited;
  visited.visit(engine.state(), engine.time());
  const std::uint64_t t0 = engine.time();
  while (engine.time() - t0 < cap) {
    const Step s = engine.step();
    if (auto earlier = visited.visit(s.state, engine.time() - t0)) {
      const std::uint64_t t = engine.time() - t0;
      return {StopTime::observed(t), t - *earlier};
    }
  }
  return {StopTime::censored_at(cap), 0};
}

StopTime first_return_time(WalkEngine& engine, unsigned l, std::uint64_t cap) {
  if (l < 1) throw std::invalid_argument("first_return_time: l must be >= 1");
  const std::size_t len = 2 * static_cast<std::size_t>(l);
  std::vector<unsigned> window;
  window.reserve(len + 1);
  const std::uint64_t t0 = engine.time();
  while (engine.time() - t0 < cap) {
    window.push_back(engine.step().index);
    if (window.size() > len) window.erase(window.begin());
    if (window.size() == len && g2l(IndexWord(window))) {
      return StopTime::observed(engine.time() - t0);
    }
  }
  return StopTime::censored_at(cap);
}

}  // namespace hcube
