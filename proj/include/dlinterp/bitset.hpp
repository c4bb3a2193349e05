#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace dlinterp {

// Fixed-width dynamic bitset. Used for types (bits over a closure index) and
// mosaics (bits over a type universe). Unused high bits of the last word are
// always zero, so word-wise comparison and hashing are exact.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  bool is_subset_of(const Bitset& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~o.words_[k]) return false;
    return true;
  }
  bool intersects(const Bitset& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & o.words_[k]) return true;
    return false;
  }

  Bitset& operator&=(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  Bitset& operator|=(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  // this \ o
  Bitset& subtract(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
    return *this;
  }
  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
  friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
  friend Bitset operator-(Bitset a, const Bitset& b) { return a.subtract(b); }

  friend bool operator==(const Bitset& a, const Bitset& b) {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }
  // Total order: by size, then lexicographic on words from the low end.
  friend bool operator<(const Bitset& a, const Bitset& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    return a.words_ < b.words_;
  }

  // Index of the first set bit at or after `from`, or size() when none.
  std::size_t next(std::size_t from) const {
    if (from >= n_) return n_;
    std::size_t k = from >> 6;
    std::uint64_t w = words_[k] & (~std::uint64_t{0} << (from & 63));
    while (true) {
      if (w) {
        std::size_t i = (k << 6) + static_cast<std::size_t>(std::countr_zero(w));
        return i < n_ ? i : n_;
      }
      if (++k >= words_.size()) return n_;
      w = words_[k];
    }
  }
  std::size_t first() const { return next(0); }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = first(); i < n_; i = next(i + 1)) f(i);
  }
  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  std::size_t hash() const {
    std::size_t h = n_ * 0x9E3779B97F4A7C15ULL;
    for (auto w : words_) h = (h ^ w) * 0x100000001B3ULL + (h >> 29);
    return h;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct BitsetHash {
  std::size_t operator()(const Bitset& b) const { return b.hash(); }
};

}  // namespace dlinterp
