#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

namespace damkit {

/// Arbitrary-precision nonnegative integer stored as little-endian 64-bit words.
/// Only addition and comparison are needed; the representation is kept trimmed
/// (no high zero words) so equality is structural.
class Tiebreak {
 public:
  Tiebreak() = default;

  static Tiebreak bit(std::size_t position) {
    Tiebreak t;
    t.words_.assign(position / 64 + 1, 0);
    t.words_.back() = std::uint64_t{1} << (position % 64);
    return t;
  }

  static Tiebreak from_words(std::span<const std::uint64_t> words) {
    Tiebreak t;
    t.words_.assign(words.begin(), words.end());
    t.trim();
    return t;
  }

  bool is_zero() const { return words_.empty(); }
  std::span<const std::uint64_t> words() const { return words_; }

  bool test(std::size_t position) const {
    const std::size_t w = position / 64;
    return w < words_.size() && ((words_[w] >> (position % 64)) & 1u);
  }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

  Tiebreak& operator+=(const Tiebreak& o) {
    if (o.words_.size() > words_.size()) words_.resize(o.words_.size(), 0);
    unsigned carry = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      const std::uint64_t rhs = i < o.words_.size() ? o.words_[i] : 0;
      if (rhs == 0 && carry == 0 && i >= o.words_.size()) break;
      const std::uint64_t s1 = words_[i] + rhs;
      const unsigned c1 = s1 < rhs;
      const std::uint64_t s2 = s1 + carry;
      const unsigned c2 = s2 < carry;
      words_[i] = s2;
      carry = c1 | c2;
    }
    if (carry) words_.push_back(1);
    return *this;
  }

  friend Tiebreak operator+(Tiebreak a, const Tiebreak& b) { return a += b; }

  friend bool operator==(const Tiebreak&, const Tiebreak&) = default;

  friend std::strong_ordering operator<=>(const Tiebreak& a, const Tiebreak& b) {
    if (a.words_.size() != b.words_.size()) return a.words_.size() <=> b.words_.size();
    for (std::size_t i = a.words_.size(); i-- > 0;) {
      if (a.words_[i] != b.words_[i]) return a.words_[i] <=> b.words_[i];
    }
    return std::strong_ordering::equal;
  }

 private:
  void trim() {
    while (!words_.empty() && words_.back() == 0) words_.pop_back();
  }

  std::vector<std::uint64_t> words_;
};

/// Path length under the lexicographic perturbation: the base (integer) length
/// compared first, then the sum of the per-edge tiebreak bits.
class PerturbedWeight {
 public:
  PerturbedWeight() = default;
  explicit PerturbedWeight(std::int64_t base) : base_(base) {}
  PerturbedWeight(std::int64_t base, Tiebreak tiebreak) : base_(base), tiebreak_(std::move(tiebreak)) {}

  static PerturbedWeight zero() { return PerturbedWeight{}; }

  std::int64_t base() const { return base_; }
  const Tiebreak& tiebreak() const { return tiebreak_; }

  PerturbedWeight& operator+=(const PerturbedWeight& o) {
    base_ += o.base_;
    tiebreak_ += o.tiebreak_;
    return *this;
  }
  friend PerturbedWeight operator+(PerturbedWeight a, const PerturbedWeight& b) { return a += b; }

  friend bool operator==(const PerturbedWeight&, const PerturbedWeight&) = default;
  friend std::strong_ordering operator<=>(const PerturbedWeight& a, const PerturbedWeight& b) {
    if (auto c = a.base_ <=> b.base_; c != 0) return c;
    return a.tiebreak_ <=> b.tiebreak_;
  }

  friend std::ostream& operator<<(std::ostream& os, const PerturbedWeight& w) {
    return os << w.base_ << "+eps[" << w.tiebreak_.popcount() << " bits]";
  }

 private:
  std::int64_t base_ = 0;
  Tiebreak tiebreak_;
};

}  // namespace damkit
