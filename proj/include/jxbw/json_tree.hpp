#ifndef JXBW_JSON_TREE_HPP
#define JXBW_JSON_TREE_HPP

#include <string>
#include <string_view>

#include "jxbw/flat_tree.hpp"
#include "jxbw/id_set.hpp"
#include "jxbw/label.hpp"

namespace jxbw {

/// Tree of one JSONL record. Labels are interned in a LabelPool shared by the
/// whole corpus; every leaf implicitly carries ids = {id()}.
class JsonTree : public FlatTree<LabelId> {
 public:
  JsonTree() = default;
  JsonTree(FlatTree<LabelId> tree, TreeId id) : FlatTree<LabelId>(std::move(tree)), id_(id) {}

  TreeId id() const noexcept { return id_; }

 private:
  TreeId id_ = 0;
};

/// Query pattern. Carries its labels directly so it can be parsed without a corpus.
using QueryTree = FlatTree<Label>;

/// Nesting deeper than this is rejected as malformed input.
inline constexpr std::size_t kMaxNestingDepth = 512;

/// Parses one JSONL record. Throws MALFORMED_JSON (with byte position) or
/// NOT_AN_OBJECT when the top-level value is not an object.
JsonTree parse_jsonl_line(std::string_view text, TreeId line_no, LabelPool& pool);

/// Parses any JSON value into a query tree. Throws MALFORMED_JSON.
QueryTree parse_query(std::string_view text);

/// Shortest round-trip decimal rendering used for NUMBER labels. Integral
/// values are printed without fraction or exponent.
std::string canonical_number(double value);

/// Copies a corpus tree (or the subtree under `root`) into a standalone query tree.
QueryTree to_query(const JsonTree& tree, const LabelPool& pool, NodeId root = 0);

/// Renders a tree back to compact JSON text. Object members keep their
/// source order; KEY nodes must have exactly one child.
std::string render_json(const QueryTree& tree, NodeId root = 0);
std::string render_json(const JsonTree& tree, const LabelPool& pool, NodeId root = 0);

/// JSON string literal (with quotes) for `text`.
std::string json_quote(std::string_view text);

}  // namespace jxbw

#endif  // JXBW_JSON_TREE_HPP
