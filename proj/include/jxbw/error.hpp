#ifndef JXBW_ERROR_HPP
#define JXBW_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace jxbw {

enum class ErrorCode {
  malformed_json,
  not_an_object,
  unknown_label,
  empty_corpus,
  empty_tree,
  out_of_range,
  not_enough_occurrences,
  no_such_child,
  not_a_leaf,
  bad_magic,
  version_mismatch,
  truncated,
  checksum_fail,
  io,
  bad_query,
  missing_jsonl_for_baseline,
  disagreement,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace jxbw

#endif  // JXBW_ERROR_HPP
