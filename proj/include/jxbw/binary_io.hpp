#ifndef JXBW_BINARY_IO_HPP
#define JXBW_BINARY_IO_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace jxbw {

/// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Little-endian byte sink.
class BinaryWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void bytes(std::string_view b) { buf_.append(b); }
  void words(std::span<const std::uint64_t> w) {
    for (auto x : w) u64(x);
  }

  std::size_t size() const noexcept { return buf_.size(); }
  const std::string& data() const noexcept { return buf_; }
  std::string take() && { return std::move(buf_); }

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  std::string buf_;
};

/// Bounds-checked little-endian reader; every overrun throws TRUNCATED.
class BinaryReader {
 public:
  explicit BinaryReader(std::string_view data) : data_(data) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  std::string_view bytes(std::uint64_t n);
  /// Reads a count and checks that at least count * min_bytes_each bytes remain.
  std::uint64_t count(std::uint64_t min_bytes_each, std::string_view what);

  std::size_t position() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return data_.size() - pos_; }

 private:
  std::uint64_t get(int n);
  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace jxbw

#endif  // JXBW_BINARY_IO_HPP
