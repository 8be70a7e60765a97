#ifndef JXBW_SUCCINCT_INT_VECTOR_HPP
#define JXBW_SUCCINCT_INT_VECTOR_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

namespace jxbw::succinct {

/// Fixed-width packed unsigned integers (width 1..64 bits).
class IntVector {
 public:
  IntVector() = default;
  IntVector(std::uint64_t size, std::uint64_t max_value)
      : size_(size), width_(std::max(1u, static_cast<unsigned>(std::bit_width(max_value)))),
        words_((size * width_ + 63) / 64 + 1, 0) {}

  std::uint64_t size() const noexcept { return size_; }
  unsigned width() const noexcept { return width_; }
  std::uint64_t bits() const noexcept { return words_.size() * 64; }

  std::uint64_t operator[](std::uint64_t i) const noexcept {
    const std::uint64_t bit = i * width_;
    const std::uint64_t w = bit / 64;
    const unsigned off = bit % 64;
    std::uint64_t v = words_[w] >> off;
    if (off + width_ > 64) v |= words_[w + 1] << (64 - off);
    return v & mask();
  }

  void set(std::uint64_t i, std::uint64_t value) noexcept {
    const std::uint64_t bit = i * width_;
    const std::uint64_t w = bit / 64;
    const unsigned off = bit % 64;
    value &= mask();
    words_[w] = (words_[w] & ~(mask() << off)) | (value << off);
    if (off + width_ > 64) {
      const unsigned spill = off + width_ - 64;
      const std::uint64_t high = (std::uint64_t{1} << spill) - 1;
      words_[w + 1] = (words_[w + 1] & ~high) | (value >> (64 - off));
    }
  }

 private:
  std::uint64_t mask() const noexcept { return width_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width_) - 1; }

  std::uint64_t size_ = 0;
  unsigned width_ = 1;
  std::vector<std::uint64_t> words_;
};

}  // namespace jxbw::succinct

#endif  // JXBW_SUCCINCT_INT_VECTOR_HPP
