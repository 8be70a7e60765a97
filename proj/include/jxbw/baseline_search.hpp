#ifndef JXBW_BASELINE_SEARCH_HPP
#define JXBW_BASELINE_SEARCH_HPP

#include <optional>
#include <span>
#include <vector>

#include "jxbw/id_set.hpp"
#include "jxbw/json_tree.hpp"
#include "jxbw/label.hpp"
#include "jxbw/merged_tree.hpp"

namespace jxbw {

/// Tree-by-tree search. A tree matches when some node admits an embedding of
/// the query that preserves labels and parent-child edges, maps the children
/// of an object (or key) injectively in any order, and maps the children of an
/// array to an order-preserving subsequence of the data array's elements.
ResultSet naive_search(std::span<const JsonTree> trees, const LabelPool& pool, const QueryTree& q);

/// True when the query subtree under q_node embeds at node v of `tree`.
bool embeds_at(const JsonTree& tree, const LabelPool& pool, NodeId v, const QueryTree& q, NodeId q_node);

/// Traversal search over the merged tree: collect every node carrying the
/// query root's label, match the query below each candidate, intersect the
/// collected id sets per candidate and unite across candidates.
///
/// Object children are compared with a two-pointer scan over label-sorted
/// child lists. Array children are matched per line: each element keeps the
/// line-local index it had in the source, and the query elements must land on
/// strictly increasing indices of the same line. A query leaf matched at an
/// inner node contributes every line that reaches that node.
class MergedTreeSearcher {
 public:
  MergedTreeSearcher(const MergedTree& mt, const LabelPool& pool);

  ResultSet search(const QueryTree& q) const;

  /// All nodes labeled `label`, depth-first.
  std::vector<NodeId> find_candidates(const Label& label) const;
  /// One id set per matched query component, or nullopt when the query does
  /// not embed at mt_node. Array components contribute a single set of lines.
  std::optional<std::vector<IdSet>> match_subtree(NodeId mt_node, const QueryTree& q, NodeId q_node) const;

 private:
  struct Context;
  std::optional<Context> make_context(const QueryTree& q) const;
  std::optional<std::vector<IdSet>> match_subtree(const Context& ctx, NodeId mt_node, NodeId q_node) const;
  IdSet match_array(const Context& ctx, NodeId mt_node, std::span<const NodeId> q_children, std::size_t q_idx,
                    const LineBounds* bounds) const;

  const MergedTree& mt_;
  const LabelPool& pool_;
  std::vector<std::vector<NodeId>> sorted_children_;  // by Label, for non-array nodes
};

ResultSet mt_search(const MergedTree& mt, const LabelPool& pool, const QueryTree& q);

}  // namespace jxbw

#endif  // JXBW_BASELINE_SEARCH_HPP
