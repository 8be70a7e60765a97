#include "jxbw/id_store.hpp"

#include <string>

#include "jxbw/error.hpp"

namespace jxbw {
namespace {

std::uint64_t to_key(TreeId id) { return id; }
std::uint64_t to_key(const ArrayPosition& p) { return (std::uint64_t(p.tree) << 32) | p.index; }

template <class T>
T from_key(std::uint64_t v);
template <>
TreeId from_key<TreeId>(std::uint64_t v) {
  return static_cast<TreeId>(v);
}
template <>
ArrayPosition from_key<ArrayPosition>(std::uint64_t v) {
  return {static_cast<TreeId>(v >> 32), static_cast<std::uint32_t>(v & 0xFFFFFFFFu)};
}

void put_varint(std::string& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7F) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

}  // namespace

template <class T>
void SetStore<T>::write(BinaryWriter& w) const {
  std::string payload;
  std::vector<std::uint64_t> offsets{0};
  offsets.reserve(starts_.size());
  for (std::size_t i = 0; i < size(); ++i) {
    std::uint64_t prev = 0;
    for (const T& v : (*this)[i]) {
      const std::uint64_t key = to_key(v);
      put_varint(payload, key - prev);
      prev = key;
    }
    offsets.push_back(payload.size());
  }
  w.u64(size());
  w.words(offsets);
  w.bytes(payload);
}

template <class T>
SetStore<T> SetStore<T>::read(BinaryReader& r, std::uint64_t expected, std::string_view what) {
  const std::string name(what);
  const std::uint64_t count = r.u64();
  if (count != expected) {
    throw Error(ErrorCode::truncated,
                name + " has " + std::to_string(count) + " entries, expected " + std::to_string(expected));
  }
  if (count + 1 > r.remaining() / 8) throw Error(ErrorCode::truncated, name + " directory exceeds file");
  std::vector<std::uint64_t> offsets(count + 1);
  for (auto& x : offsets) x = r.u64();
  if (offsets.front() != 0) throw Error(ErrorCode::truncated, name + " directory does not start at 0");
  for (std::size_t i = 1; i < offsets.size(); ++i) {
    if (offsets[i] < offsets[i - 1]) throw Error(ErrorCode::truncated, name + " directory is not monotone");
  }
  const std::string_view payload = r.bytes(offsets.back());

  SetStore out;
  out.starts_.reserve(count + 1);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t pos = offsets[i];
    const std::uint64_t end = offsets[i + 1];
    std::uint64_t value = 0;
    bool first = true;
    while (pos < end) {
      std::uint64_t delta = 0;
      unsigned shift = 0;
      for (;;) {
        if (pos == end || shift > 63) throw Error(ErrorCode::truncated, name + " entry " + std::to_string(i) + " is corrupt");
        const auto byte = static_cast<unsigned char>(payload[pos++]);
        delta |= std::uint64_t(byte & 0x7F) << shift;
        if (!(byte & 0x80)) break;
        shift += 7;
      }
      if (!first && delta == 0) throw Error(ErrorCode::truncated, name + " entry " + std::to_string(i) + " is not strictly sorted");
      first = false;
      value += delta;
      out.values_.push_back(from_key<T>(value));
    }
    out.starts_.push_back(out.values_.size());
  }
  return out;
}

template class SetStore<TreeId>;
template class SetStore<ArrayPosition>;

}  // namespace jxbw
