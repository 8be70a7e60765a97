#include "jxbw/succinct/wavelet_matrix.hpp"

#include <bit>
#include <string>

#include "jxbw/error.hpp"

namespace jxbw::succinct {
namespace {

unsigned level_count(std::uint32_t max_symbol) {
  return std::max(1u, static_cast<unsigned>(std::bit_width(max_symbol)));
}

}  // namespace

WaveletMatrix::WaveletMatrix(std::span<const std::uint32_t> values, std::uint32_t max_symbol)
    : size_(values.size()), max_symbol_(max_symbol) {
  const unsigned depth = level_count(max_symbol);
  std::vector<std::uint32_t> cur(values.begin(), values.end());
  for (auto v : cur) {
    if (v > max_symbol) {
      throw Error(ErrorCode::out_of_range,
                  "symbol " + std::to_string(v) + " exceeds " + std::to_string(max_symbol));
    }
  }
  std::vector<std::uint32_t> next(cur.size());
  levels_.reserve(depth);
  for (unsigned l = 0; l < depth; ++l) {
    const unsigned shift = depth - 1 - l;
    BitBuffer bits(cur.size());
    std::size_t zeros = 0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if ((cur[i] >> shift) & 1u) bits.set(i); else ++zeros;
    }
    std::size_t z = 0, o = zeros;
    for (auto v : cur) {
      if ((v >> shift) & 1u) next[o++] = v; else next[z++] = v;
    }
    cur.swap(next);
    levels_.emplace_back(std::move(bits));
    zeros_.push_back(zeros);
  }
}

WaveletMatrix::WaveletMatrix(std::uint64_t size, std::uint32_t max_symbol, std::vector<RankSelectBits> levels)
    : size_(size), max_symbol_(max_symbol), levels_(std::move(levels)) {
  if (levels_.size() != level_count(max_symbol)) {
    throw Error(ErrorCode::truncated, "wavelet matrix level count mismatch");
  }
  for (const auto& lv : levels_) {
    if (lv.size() != size_) throw Error(ErrorCode::truncated, "wavelet matrix level length mismatch");
    zeros_.push_back(lv.zeros());
  }
}

std::uint32_t WaveletMatrix::access(std::uint64_t i) const {
  if (i == 0 || i > size_) {
    throw Error(ErrorCode::out_of_range,
                "position " + std::to_string(i) + " not in [1, " + std::to_string(size_) + "]");
  }
  std::uint64_t p = i - 1;
  std::uint32_t value = 0;
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    const auto& bv = levels_[l];
    const bool bit = (bv.words()[p / 64] >> (p % 64)) & 1u;
    value = (value << 1) | static_cast<std::uint32_t>(bit);
    const std::uint64_t ones_before = bv.rank1_unchecked(p);
    p = bit ? zeros_[l] + ones_before : p - ones_before;
  }
  return value;
}

std::uint64_t WaveletMatrix::rank_unchecked(std::uint32_t c, std::uint64_t i) const noexcept {
  std::uint64_t s = 0, e = i;
  const auto depth = levels_.size();
  for (std::size_t l = 0; l < depth && s < e; ++l) {
    const auto& bv = levels_[l];
    const std::uint64_t rs = bv.rank1_unchecked(s), re = bv.rank1_unchecked(e);
    if ((c >> (depth - 1 - l)) & 1u) {
      s = zeros_[l] + rs;
      e = zeros_[l] + re;
    } else {
      s -= rs;
      e -= re;
    }
  }
  return e - s;
}

std::uint64_t WaveletMatrix::rank(std::uint32_t c, std::uint64_t i) const {
  if (i > size_) {
    throw Error(ErrorCode::out_of_range,
                "rank position " + std::to_string(i) + " beyond length " + std::to_string(size_));
  }
  if (c > max_symbol_) return 0;
  return rank_unchecked(c, i);
}

std::uint64_t WaveletMatrix::select(std::uint32_t c, std::uint64_t k) const {
  const std::uint64_t total = c > max_symbol_ ? 0 : rank_unchecked(c, size_);
  if (k == 0 || k > total) {
    throw Error(ErrorCode::not_enough_occurrences, "select(" + std::to_string(c) + ", " + std::to_string(k) +
                                                       ") with " + std::to_string(total) + " occurrences");
  }
  return select_unchecked(c, k);
}

std::uint64_t WaveletMatrix::select_unchecked(std::uint32_t c, std::uint64_t k) const noexcept {
  const auto depth = levels_.size();
  std::uint64_t s = 0;
  for (std::size_t l = 0; l < depth; ++l) {
    const std::uint64_t rs = levels_[l].rank1_unchecked(s);
    s = ((c >> (depth - 1 - l)) & 1u) ? zeros_[l] + rs : s - rs;
  }
  std::uint64_t p = s + k - 1;
  for (std::size_t l = depth; l-- > 0;) {
    if ((c >> (depth - 1 - l)) & 1u) {
      p = levels_[l].select1_unchecked(p - zeros_[l] + 1);
    } else {
      p = levels_[l].select0_unchecked(p + 1);
    }
  }
  return p + 1;
}

std::uint64_t WaveletMatrix::rank_less(std::uint32_t c, std::uint64_t i) const {
  if (i > size_) {
    throw Error(ErrorCode::out_of_range,
                "rank position " + std::to_string(i) + " beyond length " + std::to_string(size_));
  }
  if (c > max_symbol_) return i;
  std::uint64_t s = 0, e = i, less = 0;
  const auto depth = levels_.size();
  for (std::size_t l = 0; l < depth && s < e; ++l) {
    const auto& bv = levels_[l];
    const std::uint64_t rs = bv.rank1_unchecked(s), re = bv.rank1_unchecked(e);
    if ((c >> (depth - 1 - l)) & 1u) {
      less += (e - re) - (s - rs);
      s = zeros_[l] + rs;
      e = zeros_[l] + re;
    } else {
      s -= rs;
      e -= re;
    }
  }
  return less;
}

std::uint64_t WaveletMatrix::bits() const noexcept {
  std::uint64_t total = 0;
  for (const auto& lv : levels_) total += lv.size() + lv.directory_bits();
  return total;
}

}  // namespace jxbw::succinct
