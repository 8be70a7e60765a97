#include "jxbw/label.hpp"

#include "jxbw/error.hpp"

namespace jxbw {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::malformed_json: return "MALFORMED_JSON";
    case ErrorCode::not_an_object: return "NOT_AN_OBJECT";
    case ErrorCode::unknown_label: return "UNKNOWN_LABEL";
    case ErrorCode::empty_corpus: return "EMPTY_CORPUS";
    case ErrorCode::empty_tree: return "EMPTY_TREE";
    case ErrorCode::out_of_range: return "OUT_OF_RANGE";
    case ErrorCode::not_enough_occurrences: return "NOT_ENOUGH_OCCURRENCES";
    case ErrorCode::no_such_child: return "NO_SUCH_CHILD";
    case ErrorCode::not_a_leaf: return "NOT_A_LEAF";
    case ErrorCode::bad_magic: return "BAD_MAGIC";
    case ErrorCode::version_mismatch: return "VERSION_MISMATCH";
    case ErrorCode::truncated: return "TRUNCATED";
    case ErrorCode::checksum_fail: return "CHECKSUM_FAIL";
    case ErrorCode::io: return "IO";
    case ErrorCode::bad_query: return "BAD_QUERY";
    case ErrorCode::missing_jsonl_for_baseline: return "MISSING_JSONL_FOR_BASELINE";
    case ErrorCode::disagreement: return "DISAGREEMENT";
  }
  return "UNKNOWN";
}

std::string_view kind_name(LabelKind kind) noexcept {
  switch (kind) {
    case LabelKind::object: return "object";
    case LabelKind::array: return "array";
    case LabelKind::key: return "key";
    case LabelKind::string: return "string";
    case LabelKind::number: return "number";
    case LabelKind::true_literal: return "true";
    case LabelKind::false_literal: return "false";
    case LabelKind::null_literal: return "null";
  }
  return "?";
}

std::string to_display(const Label& label) {
  switch (label.kind) {
    case LabelKind::object: return "Object";
    case LabelKind::array: return "Array";
    case LabelKind::key: return "\"" + label.text + "\"";
    case LabelKind::string: return "'" + label.text + "'";
    case LabelKind::number: return label.text;
    case LabelKind::true_literal: return "true";
    case LabelKind::false_literal: return "false";
    case LabelKind::null_literal: return "null";
  }
  return "?";
}

std::string LabelPool::make_key(LabelKind kind, std::string_view text) {
  std::string key;
  key.reserve(text.size() + 1);
  key.push_back(static_cast<char>(kind));
  key.append(text);
  return key;
}

LabelId LabelPool::intern(LabelKind kind, std::string_view text) {
  auto [it, inserted] = index_.try_emplace(make_key(kind, text), static_cast<LabelId>(labels_.size()));
  if (inserted) labels_.push_back(Label{kind, std::string(text)});
  return it->second;
}

std::optional<LabelId> LabelPool::find(const Label& label) const {
  auto it = index_.find(make_key(label.kind, label.text));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace jxbw
