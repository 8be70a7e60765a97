#ifndef JXBW_SUCCINCT_RANK_SELECT_HPP
#define JXBW_SUCCINCT_RANK_SELECT_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace jxbw::succinct {

/// Growable bit array used to assemble a RankSelectBits.
class BitBuffer {
 public:
  BitBuffer() = default;
  explicit BitBuffer(std::uint64_t size) : words_((size + 63) / 64, 0), size_(size) {}

  void push_back(bool bit) {
    if (size_ % 64 == 0) words_.push_back(0);
    if (bit) words_.back() |= std::uint64_t{1} << (size_ % 64);
    ++size_;
  }
  // 0-based.
  void set(std::uint64_t i, bool bit = true) {
    const auto mask = std::uint64_t{1} << (i % 64);
    if (bit) words_[i / 64] |= mask; else words_[i / 64] &= ~mask;
  }
  bool get(std::uint64_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }

  std::uint64_t size() const noexcept { return size_; }
  std::vector<std::uint64_t>& words() noexcept { return words_; }

 private:
  std::vector<std::uint64_t> words_;
  std::uint64_t size_ = 0;
};

/// Static bit array with constant-time rank and near-constant-time select.
///
/// Positions are 1-based: rank1(i) counts ones in B[1..i] (rank at 0 is 0)
/// and select1(k) is the position of the k-th one. Rank uses a two-level
/// directory (absolute count per 512-bit superblock plus seven packed 9-bit
/// word counts); select samples the superblock of every 4096th one and zero
/// and finishes with a short binary search. Directory space is about 27% of
/// the raw bits.
class RankSelectBits {
 public:
  RankSelectBits() = default;
  explicit RankSelectBits(BitBuffer bits);
  RankSelectBits(std::vector<std::uint64_t> words, std::uint64_t size);

  template <class Range>
  static RankSelectBits from_bools(const Range& bits) {
    BitBuffer buf;
    for (bool b : bits) buf.push_back(b);
    return RankSelectBits(std::move(buf));
  }

  std::uint64_t size() const noexcept { return size_; }
  std::uint64_t ones() const noexcept { return ones_; }
  std::uint64_t zeros() const noexcept { return size_ - ones_; }

  /// B[i], 1 <= i <= size(). Throws OUT_OF_RANGE.
  bool access(std::uint64_t i) const;
  bool operator[](std::uint64_t i) const { return access(i); }

  /// Occurrences of 1 (or 0) in B[1..i], 0 <= i <= size(). Throws OUT_OF_RANGE.
  std::uint64_t rank1(std::uint64_t i) const;
  std::uint64_t rank0(std::uint64_t i) const { return i - rank1(i); }
  std::uint64_t rank(bool c, std::uint64_t i) const { return c ? rank1(i) : rank0(i); }

  /// Position of the k-th 1 (or 0). Throws NOT_ENOUGH_OCCURRENCES unless
  /// 1 <= k <= ones() (or zeros()).
  std::uint64_t select1(std::uint64_t k) const;
  std::uint64_t select0(std::uint64_t k) const;
  std::uint64_t select(bool c, std::uint64_t k) const { return c ? select1(k) : select0(k); }

  /// Unchecked 0-based variants for hot loops inside this library:
  /// number of ones among the first `prefix` bits, and 0-based position of
  /// the k-th one / zero (k >= 1).
  std::uint64_t rank1_unchecked(std::uint64_t prefix) const noexcept;
  std::uint64_t select1_unchecked(std::uint64_t k) const noexcept;
  std::uint64_t select0_unchecked(std::uint64_t k) const noexcept;

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  /// Bits spent on rank/select directories (excluding the raw bits).
  std::uint64_t directory_bits() const noexcept;

 private:
  void build_directories();
  void rank_checked(std::uint64_t i) const;
  std::uint64_t word_rank(std::uint64_t block, unsigned w) const noexcept {
    return w == 0 ? 0 : (directory_[2 * block + 1] >> (9 * (w - 1))) & 0x1FFu;
  }

  std::vector<std::uint64_t> words_;
  std::uint64_t size_ = 0;
  std::uint64_t ones_ = 0;
  std::vector<std::uint64_t> directory_;  // per superblock: absolute rank, packed word ranks
  std::vector<std::uint32_t> select1_samples_;
  std::vector<std::uint32_t> select0_samples_;
};

}  // namespace jxbw::succinct

#endif  // JXBW_SUCCINCT_RANK_SELECT_HPP
