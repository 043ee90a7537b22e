#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>

namespace dnflearn {

// Largest supported dimension. Assignments, terms and index sets are fixed-width
// packed words so that copies never allocate.
inline constexpr int kMaxVars = 256;

// Fixed-width packed bit vector over positions [0, kMaxVars).
class BitVec {
 public:
  static constexpr int kWords = kMaxVars / 64;

  constexpr BitVec() = default;

  static constexpr BitVec from_word(std::uint64_t w) {
    BitVec b;
    b.words_[0] = w;
    return b;
  }

  // Positions [0, count) set.
  static constexpr BitVec low_mask(int count) {
    BitVec b;
    for (int i = 0; i < kWords && count > 0; ++i, count -= 64) {
      b.words_[i] = count >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << count) - 1);
    }
    return b;
  }

  constexpr bool test(int pos) const { return (words_[pos >> 6] >> (pos & 63)) & 1U; }
  constexpr void set(int pos) { words_[pos >> 6] |= std::uint64_t{1} << (pos & 63); }
  constexpr void reset(int pos) { words_[pos >> 6] &= ~(std::uint64_t{1} << (pos & 63)); }
  constexpr void assign(int pos, bool v) { v ? set(pos) : reset(pos); }
  constexpr void flip(int pos) { words_[pos >> 6] ^= std::uint64_t{1} << (pos & 63); }

  constexpr std::uint64_t word(int i) const { return words_[i]; }
  constexpr void set_word(int i, std::uint64_t w) { words_[i] = w; }

  constexpr int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  constexpr bool none() const {
    for (auto w : words_)
      if (w != 0) return false;
    return true;
  }
  constexpr bool any() const { return !none(); }

  // Lowest set position, or -1.
  constexpr int first() const {
    for (int i = 0; i < kWords; ++i)
      if (words_[i] != 0) return i * 64 + std::countr_zero(words_[i]);
    return -1;
  }
  // Highest set position, or -1.
  constexpr int last() const {
    for (int i = kWords - 1; i >= 0; --i)
      if (words_[i] != 0) return i * 64 + 63 - std::countl_zero(words_[i]);
    return -1;
  }

  constexpr bool is_subset_of(const BitVec& other) const {
    for (int i = 0; i < kWords; ++i)
      if ((words_[i] & ~other.words_[i]) != 0) return false;
    return true;
  }
  constexpr bool intersects(const BitVec& other) const {
    for (int i = 0; i < kWords; ++i)
      if ((words_[i] & other.words_[i]) != 0) return true;
    return false;
  }

  template <class Fn>
  constexpr void for_each_set(Fn&& fn) const {
    for (int i = 0; i < kWords; ++i) {
      std::uint64_t w = words_[i];
      while (w != 0) {
        fn(i * 64 + std::countr_zero(w));
        w &= w - 1;
      }
    }
  }

  constexpr BitVec& operator&=(const BitVec& o) {
    for (int i = 0; i < kWords; ++i) words_[i] &= o.words_[i];
    return *this;
  }
  constexpr BitVec& operator|=(const BitVec& o) {
    for (int i = 0; i < kWords; ++i) words_[i] |= o.words_[i];
    return *this;
  }
  constexpr BitVec& operator^=(const BitVec& o) {
    for (int i = 0; i < kWords; ++i) words_[i] ^= o.words_[i];
    return *this;
  }
  // a & ~b
  constexpr BitVec minus(const BitVec& o) const {
    BitVec r;
    for (int i = 0; i < kWords; ++i) r.words_[i] = words_[i] & ~o.words_[i];
    return r;
  }

  friend constexpr BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }
  friend constexpr BitVec operator|(BitVec a, const BitVec& b) { return a |= b; }
  friend constexpr BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

  friend constexpr bool operator==(const BitVec&, const BitVec&) = default;
  // Arbitrary but total order (word-wise); used only for containers.
  friend constexpr std::strong_ordering operator<=>(const BitVec& a, const BitVec& b) {
    for (int i = kWords - 1; i >= 0; --i)
      if (a.words_[i] != b.words_[i]) return a.words_[i] <=> b.words_[i];
    return std::strong_ordering::equal;
  }

  std::size_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto w : words_) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

 private:
  std::array<std::uint64_t, kWords> words_{};
};

}  // namespace dnflearn
