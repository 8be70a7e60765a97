#include "jxbw/succinct/rank_select.hpp"

#include <bit>
#include <string>

#include "jxbw/error.hpp"

namespace jxbw::succinct {
namespace {

constexpr std::uint64_t kSuperblockBits = 512;
constexpr std::uint64_t kWordsPerSuperblock = 8;
constexpr std::uint64_t kSelectSampleRate = 4096;

// Position (0..63) of the k-th set bit of `word`, k >= 1.
unsigned select_in_word(std::uint64_t word, std::uint64_t k) noexcept {
  unsigned base = 0;
  for (;;) {
    const auto byte_count = static_cast<std::uint64_t>(std::popcount(word & 0xFFu));
    if (k <= byte_count) break;
    k -= byte_count;
    word >>= 8;
    base += 8;
  }
  for (;; ++base, word >>= 1) {
    if (word & 1u) {
      if (--k == 0) return base;
    }
  }
}

}  // namespace

RankSelectBits::RankSelectBits(BitBuffer bits) : words_(std::move(bits.words())), size_(bits.size()) {
  build_directories();
}

RankSelectBits::RankSelectBits(std::vector<std::uint64_t> words, std::uint64_t size)
    : words_(std::move(words)), size_(size) {
  words_.resize((size_ + 63) / 64, 0);
  if (size_ % 64 != 0) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
  build_directories();
}

void RankSelectBits::build_directories() {
  const std::uint64_t blocks = (words_.size() + kWordsPerSuperblock - 1) / kWordsPerSuperblock;
  directory_.assign(2 * blocks + 2, 0);
  std::uint64_t total = 0;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    directory_[2 * b] = total;
    std::uint64_t packed = 0;
    std::uint64_t within = 0;
    for (std::uint64_t w = 0; w < kWordsPerSuperblock; ++w) {
      const std::uint64_t idx = b * kWordsPerSuperblock + w;
      if (w > 0) packed |= within << (9 * (w - 1));
      if (idx < words_.size()) within += static_cast<std::uint64_t>(std::popcount(words_[idx]));
    }
    directory_[2 * b + 1] = packed;
    total += within;
  }
  directory_[2 * blocks] = total;
  ones_ = total;

  select1_samples_.clear();
  select0_samples_.clear();
  std::uint64_t next1 = 1, next0 = 1;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    const std::uint64_t ones_end = directory_[2 * b + 2];
    const std::uint64_t bits_end = std::min(size_, (b + 1) * kSuperblockBits);
    const std::uint64_t zeros_end = bits_end - ones_end;
    while (next1 <= ones_end) {
      select1_samples_.push_back(static_cast<std::uint32_t>(b));
      next1 += kSelectSampleRate;
    }
    while (next0 <= zeros_end) {
      select0_samples_.push_back(static_cast<std::uint32_t>(b));
      next0 += kSelectSampleRate;
    }
  }
}

void RankSelectBits::rank_checked(std::uint64_t i) const {
  if (i > size_) {
    throw Error(ErrorCode::out_of_range,
                "rank position " + std::to_string(i) + " beyond length " + std::to_string(size_));
  }
}

bool RankSelectBits::access(std::uint64_t i) const {
  if (i == 0 || i > size_) {
    throw Error(ErrorCode::out_of_range, "bit position " + std::to_string(i) + " not in [1, " +
                                             std::to_string(size_) + "]");
  }
  return (words_[(i - 1) / 64] >> ((i - 1) % 64)) & 1u;
}

std::uint64_t RankSelectBits::rank1_unchecked(std::uint64_t prefix) const noexcept {
  const std::uint64_t word = prefix / 64;
  const std::uint64_t block = word / kWordsPerSuperblock;
  std::uint64_t r = directory_[2 * block] + word_rank(block, static_cast<unsigned>(word % kWordsPerSuperblock));
  const unsigned offset = prefix % 64;
  if (offset != 0) r += static_cast<std::uint64_t>(std::popcount(words_[word] & ((std::uint64_t{1} << offset) - 1)));
  return r;
}

std::uint64_t RankSelectBits::rank1(std::uint64_t i) const {
  rank_checked(i);
  return rank1_unchecked(i);
}

std::uint64_t RankSelectBits::select1_unchecked(std::uint64_t k) const noexcept {
  const std::uint64_t sample = (k - 1) / kSelectSampleRate;
  std::uint64_t lo = select1_samples_[sample];
  std::uint64_t hi = sample + 1 < select1_samples_.size() ? select1_samples_[sample + 1] + 1
                                                          : (directory_.size() / 2 - 1);
  // Last superblock whose absolute rank is < k.
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (directory_[2 * mid] < k) lo = mid; else hi = mid;
  }
  std::uint64_t rem = k - directory_[2 * lo];
  unsigned w = 1;
  while (w < kWordsPerSuperblock && word_rank(lo, w) < rem) ++w;
  --w;
  rem -= word_rank(lo, w);
  const std::uint64_t word = lo * kWordsPerSuperblock + w;
  return word * 64 + select_in_word(words_[word], rem);
}

std::uint64_t RankSelectBits::select0_unchecked(std::uint64_t k) const noexcept {
  const std::uint64_t sample = (k - 1) / kSelectSampleRate;
  std::uint64_t lo = select0_samples_[sample];
  std::uint64_t hi = sample + 1 < select0_samples_.size() ? select0_samples_[sample + 1] + 1
                                                          : (directory_.size() / 2 - 1);
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (mid * kSuperblockBits - directory_[2 * mid] < k) lo = mid; else hi = mid;
  }
  std::uint64_t rem = k - (lo * kSuperblockBits - directory_[2 * lo]);
  unsigned w = 1;
  while (w < kWordsPerSuperblock && (64 * w - word_rank(lo, w)) < rem) ++w;
  --w;
  rem -= 64 * w - word_rank(lo, w);
  const std::uint64_t word = lo * kWordsPerSuperblock + w;
  return word * 64 + select_in_word(~words_[word], rem);
}

std::uint64_t RankSelectBits::select1(std::uint64_t k) const {
  if (k == 0 || k > ones_) {
    throw Error(ErrorCode::not_enough_occurrences,
                "select1(" + std::to_string(k) + ") with " + std::to_string(ones_) + " ones");
  }
  return select1_unchecked(k) + 1;
}

std::uint64_t RankSelectBits::select0(std::uint64_t k) const {
  if (k == 0 || k > zeros()) {
    throw Error(ErrorCode::not_enough_occurrences,
                "select0(" + std::to_string(k) + ") with " + std::to_string(zeros()) + " zeros");
  }
  return select0_unchecked(k) + 1;
}

std::uint64_t RankSelectBits::directory_bits() const noexcept {
  return 64 * directory_.size() + 32 * (select1_samples_.size() + select0_samples_.size());
}

}  // namespace jxbw::succinct
