#ifndef JXBW_SUCCINCT_WAVELET_MATRIX_HPP
#define JXBW_SUCCINCT_WAVELET_MATRIX_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "jxbw/succinct/rank_select.hpp"

namespace jxbw::succinct {

/// Sequence over the alphabet [0, max_symbol] with access, rank and select in
/// O(log sigma) bit-vector operations. Positions are 1-based.
class WaveletMatrix {
 public:
  WaveletMatrix() = default;
  WaveletMatrix(std::span<const std::uint32_t> values, std::uint32_t max_symbol);

  /// Rebuilds from serialized level bit arrays (most significant level first).
  WaveletMatrix(std::uint64_t size, std::uint32_t max_symbol, std::vector<RankSelectBits> levels);

  std::uint64_t size() const noexcept { return size_; }
  std::uint32_t max_symbol() const noexcept { return max_symbol_; }
  unsigned levels() const noexcept { return static_cast<unsigned>(levels_.size()); }
  const RankSelectBits& level(unsigned l) const { return levels_[l]; }

  /// A[i], 1 <= i <= size(). Throws OUT_OF_RANGE.
  std::uint32_t access(std::uint64_t i) const;
  std::uint32_t operator[](std::uint64_t i) const { return access(i); }

  /// Occurrences of c in A[1..i], 0 <= i <= size(). Throws OUT_OF_RANGE.
  std::uint64_t rank(std::uint32_t c, std::uint64_t i) const;
  std::uint64_t count(std::uint32_t c) const { return rank(c, size_); }

  /// Position of the k-th c. Throws NOT_ENOUGH_OCCURRENCES.
  std::uint64_t select(std::uint32_t c, std::uint64_t k) const;
  /// select for a k already known to be in [1, count(c)].
  std::uint64_t select_unchecked(std::uint32_t c, std::uint64_t k) const noexcept;

  /// Number of values strictly below c in A[1..i].
  std::uint64_t rank_less(std::uint32_t c, std::uint64_t i) const;

  std::uint64_t bits() const noexcept;

 private:
  std::uint64_t rank_unchecked(std::uint32_t c, std::uint64_t i) const noexcept;

  std::uint64_t size_ = 0;
  std::uint32_t max_symbol_ = 0;
  std::vector<RankSelectBits> levels_;
  std::vector<std::uint64_t> zeros_;
};

}  // namespace jxbw::succinct

#endif  // JXBW_SUCCINCT_WAVELET_MATRIX_HPP
