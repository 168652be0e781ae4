#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

namespace uniblock {

namespace bits {

inline constexpr std::size_t kWordBits = 64;

inline std::size_t words_for(std::size_t nbits) { return (nbits + kWordBits - 1) / kWordBits; }

// Mask with bits [lo, hi) set inside a single word, 0 <= lo <= hi <= 64.
inline std::uint64_t range_mask(std::size_t lo, std::size_t hi) {
  if (lo >= hi) return 0;
  std::uint64_t m = ~0ULL >> (kWordBits - (hi - lo));
  return m << lo;
}

inline int popcount(std::uint64_t w) { return __builtin_popcountll(w); }

// Set bits [lo, hi) in a word array.
inline void fill_range(std::uint64_t* w, std::size_t lo, std::size_t hi) {
  if (lo >= hi) return;
  std::size_t first = lo / kWordBits, last = (hi - 1) / kWordBits;
  if (first == last) {
    w[first] |= range_mask(lo % kWordBits, (hi - 1) % kWordBits + 1);
    return;
  }
  w[first] |= range_mask(lo % kWordBits, kWordBits);
  for (std::size_t i = first + 1; i < last; ++i) w[i] = ~0ULL;
  w[last] |= range_mask(0, (hi - 1) % kWordBits + 1);
}

// Number of set bits in [lo, hi) of a word array.
inline std::size_t count_range(const std::uint64_t* w, std::size_t lo, std::size_t hi) {
  if (lo >= hi) return 0;
  std::size_t first = lo / kWordBits, last = (hi - 1) / kWordBits;
  if (first == last) return popcount(w[first] & range_mask(lo % kWordBits, (hi - 1) % kWordBits + 1));
  std::size_t c = popcount(w[first] & range_mask(lo % kWordBits, kWordBits));
  for (std::size_t i = first + 1; i < last; ++i) c += popcount(w[i]);
  c += popcount(w[last] & range_mask(0, (hi - 1) % kWordBits + 1));
  return c;
}

} // namespace bits

// Dynamic fixed-size bitset. Word storage is exposed so callers can run
// intersection scans without per-bit calls.
class Bitset {
public:
  Bitset() = default;
  explicit Bitset(std::size_t n) : n_(n), w_(bits::words_for(n), 0) {}

  std::size_t size() const { return n_; }
  std::size_t word_count() const { return w_.size(); }
  std::span<const std::uint64_t> words() const { return w_; }
  std::span<std::uint64_t> words() { return w_; }

  bool test(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1; }
  void set(std::size_t i) { w_[i / 64] |= 1ULL << (i % 64); }
  void reset(std::size_t i) { w_[i / 64] &= ~(1ULL << (i % 64)); }
  void clear() { std::memset(w_.data(), 0, w_.size() * sizeof(std::uint64_t)); }

  void set_range(std::size_t lo, std::size_t hi) { bits::fill_range(w_.data(), lo, hi); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_) c += bits::popcount(w);
    return c;
  }

  // First set bit at position >= from, or -1.
  long long find_first(std::size_t from = 0) const {
    if (from >= n_) return -1;
    std::size_t wi = from / 64;
    std::uint64_t w = w_[wi] & ~((1ULL << (from % 64)) - 1);
    while (true) {
      if (w != 0) {
        std::size_t i = wi * 64 + static_cast<std::size_t>(__builtin_ctzll(w));
        return i < n_ ? static_cast<long long>(i) : -1;
      }
      if (++wi >= w_.size()) return -1;
      w = w_[wi];
    }
  }

private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

// Symmetric adjacency bit matrix with contiguous row storage. Rows are
// host-vertex neighbourhoods; intersecting a few rows word-by-word is the
// common-neighbourhood primitive the embedder runs on.
class BitMatrix {
public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n)
      : n_(n), words_(bits::words_for(n)), bits_(n * bits::words_for(n), 0) {}

  std::size_t size() const { return n_; }
  std::size_t words_per_row() const { return words_; }

  const std::uint64_t* row(std::size_t u) const { return bits_.data() + u * words_; }
  std::uint64_t* row(std::size_t u) { return bits_.data() + u * words_; }

  bool test(std::size_t u, std::size_t v) const { return (row(u)[v / 64] >> (v % 64)) & 1; }

  void set_edge(std::size_t u, std::size_t v) {
    row(u)[v / 64] |= 1ULL << (v % 64);
    row(v)[u / 64] |= 1ULL << (u % 64);
  }

  void fill_row_range(std::size_t u, std::size_t lo, std::size_t hi) {
    bits::fill_range(row(u), lo, hi);
  }

  void reset_bit(std::size_t u, std::size_t v) { row(u)[v / 64] &= ~(1ULL << (v % 64)); }

  std::size_t count_row_range(std::size_t u, std::size_t lo, std::size_t hi) const {
    return bits::count_range(row(u), lo, hi);
  }

  std::size_t degree(std::size_t u) const { return bits::count_range(row(u), 0, n_); }

  // Total number of set bits; for a symmetric matrix this is twice the edge
  // count.
  std::size_t count_all() const {
    std::size_t c = 0;
    for (auto w : bits_) c += bits::popcount(w);
    return c;
  }

private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

} // namespace uniblock
