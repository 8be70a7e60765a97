#ifndef JXBW_MERGED_TREE_HPP
#define JXBW_MERGED_TREE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "jxbw/flat_tree.hpp"
#include "jxbw/id_set.hpp"
#include "jxbw/json_tree.hpp"
#include "jxbw/label.hpp"

namespace jxbw {

/// Union of many JSON trees: shared root-prefix paths are collapsed and the
/// line ids of every collapsed leaf are unioned.
///
/// Besides leaf ids, each node keeps
///  - ids gathered at internal positions (a line whose value at this path was
///    an empty object or array contributes its id here), and
///  - the source positions of array elements, so element order inside every
///    individual line survives the merge.
class MergedTree {
 public:
  struct Node {
    LabelId label = 0;
    std::vector<NodeId> children;
    IdSet ids;
    std::vector<ArrayPosition> positions;
  };

  MergedTree() = default;

  /// Copies a parsed line: leaves get ids = {tree.id()}, children of arrays get
  /// their source positions.
  static MergedTree from_tree(const JsonTree& tree, const LabelPool& pool);

  bool empty() const noexcept { return nodes_.empty(); }
  std::size_t size() const noexcept { return nodes_.size(); }
  static constexpr NodeId root() noexcept { return 0; }

  const Node& node(NodeId v) const { return nodes_[v]; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t leaf_count() const;

  /// Every id stored in the subtree of v, i.e. the lines containing v's path.
  IdSet subtree_ids(NodeId v) const;

  friend MergedTree merge_trees(MergedTree t, const MergedTree& t2);

 private:
  NodeId add_node(LabelId label);
  NodeId copy_subtree(const MergedTree& src, NodeId s);
  void merge_recursive(NodeId d, const MergedTree& src, NodeId s);

  std::vector<Node> nodes_;
};

/// Merges t2 into t: empty inputs return the other tree; differing root labels
/// attach t2 under t's root; otherwise every child of t2 merges into the first
/// same-labeled child of t or is appended as a copy.
MergedTree merge_trees(MergedTree t, const MergedTree& t2);

/// Balanced pairwise merging: (1,2),(3,4),... per level, an odd tree is carried
/// up unmerged. Throws EMPTY_CORPUS for an empty input.
MergedTree merge_all(std::span<const JsonTree> trees, const LabelPool& pool);

struct MergeStats {
  std::size_t trees = 0;         // N
  std::size_t merged_nodes = 0;  // |MT|
  std::size_t total_nodes = 0;   // M_tot
  std::size_t leaves = 0;

  double ratio() const { return total_nodes == 0 ? 1.0 : double(merged_nodes) / double(total_nodes); }
};

MergeStats merge_stats(const MergedTree& mt, std::span<const JsonTree> trees);

}  // namespace jxbw

#endif  // JXBW_MERGED_TREE_HPP
