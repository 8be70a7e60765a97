#ifndef JXBW_ID_STORE_HPP
#define JXBW_ID_STORE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "jxbw/binary_io.hpp"
#include "jxbw/id_set.hpp"

namespace jxbw {

/// Random-access sequence of sorted sets.
///
/// On disk each set is a run of delta-encoded LEB128 varints located through
/// an offset directory (entry count, count + 1 byte offsets, payload). In
/// memory the sets are kept decoded in one flat array so lookups return spans
/// without copying.
template <class T>
class SetStore {
 public:
  SetStore() : starts_{0} {}

  void push_back(std::span<const T> set) {
    values_.insert(values_.end(), set.begin(), set.end());
    starts_.push_back(values_.size());
  }

  std::size_t size() const noexcept { return starts_.size() - 1; }
  std::size_t total() const noexcept { return values_.size(); }
  /// 0-based.
  std::span<const T> operator[](std::size_t i) const {
    return {values_.data() + starts_[i], values_.data() + starts_[i + 1]};
  }

  void write(BinaryWriter& w) const;
  /// Throws TRUNCATED when the directory or payload is inconsistent or the
  /// entry count differs from `expected`.
  static SetStore read(BinaryReader& r, std::uint64_t expected, std::string_view what);

 private:
  std::vector<T> values_;
  std::vector<std::uint64_t> starts_;
};

using IdStore = SetStore<TreeId>;
using PositionStore = SetStore<ArrayPosition>;

extern template class SetStore<TreeId>;
extern template class SetStore<ArrayPosition>;

}  // namespace jxbw

#endif  // JXBW_ID_STORE_HPP
