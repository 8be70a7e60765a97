#include "jxbw/binary_io.hpp"

#include "jxbw/error.hpp"

namespace jxbw {

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t BinaryReader::get(int n) {
  if (remaining() < static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::truncated, "unexpected end of data at byte " + std::to_string(pos_));
  }
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) v |= std::uint64_t(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
  pos_ += n;
  return v;
}

std::string_view BinaryReader::bytes(std::uint64_t n) {
  if (remaining() < n) {
    throw Error(ErrorCode::truncated, "unexpected end of data at byte " + std::to_string(pos_));
  }
  auto out = data_.substr(pos_, n);
  pos_ += n;
  return out;
}

std::uint64_t BinaryReader::count(std::uint64_t min_bytes_each, std::string_view what) {
  const std::uint64_t n = u64();
  if (min_bytes_each != 0 && n > remaining() / min_bytes_each) {
    throw Error(ErrorCode::truncated, std::string(what) + " count " + std::to_string(n) + " exceeds remaining data");
  }
  return n;
}

}  // namespace jxbw
