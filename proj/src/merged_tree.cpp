#include "jxbw/merged_tree.hpp"

#include <algorithm>
#include <unordered_map>

#include "jxbw/error.hpp"

namespace jxbw {
namespace {

// Above this many (existing x incoming) child pairs the first-match lookup
// switches from a linear scan to a hash index.
constexpr std::size_t kLinearScanLimit = 64;

}  // namespace

NodeId MergedTree::add_node(LabelId label) {
  nodes_.push_back(Node{label, {}, {}, {}});
  return static_cast<NodeId>(nodes_.size() - 1);
}

MergedTree MergedTree::from_tree(const JsonTree& tree, const LabelPool& pool) {
  MergedTree mt;
  mt.nodes_.resize(tree.size());
  for (NodeId v = 0; v < tree.size(); ++v) {
    auto& n = mt.nodes_[v];
    n.label = tree.label(v);
    const auto kids = tree.children(v);
    n.children.assign(kids.begin(), kids.end());
    if (kids.empty()) n.ids.push_back(tree.id());
    if (pool[n.label].kind == LabelKind::array) {
      for (std::uint32_t k = 0; k < kids.size(); ++k) mt.nodes_[kids[k]].positions.push_back({tree.id(), k});
    }
  }
  return mt;
}

std::size_t MergedTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.children.empty(); }));
}

IdSet MergedTree::subtree_ids(NodeId v) const {
  IdSet out;
  std::vector<NodeId> stack{v};
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    const auto& n = nodes_[u];
    out.insert(out.end(), n.ids.begin(), n.ids.end());
    stack.insert(stack.end(), n.children.begin(), n.children.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

NodeId MergedTree::copy_subtree(const MergedTree& src, NodeId s) {
  const NodeId d = add_node(src.nodes_[s].label);
  nodes_[d].ids = src.nodes_[s].ids;
  nodes_[d].positions = src.nodes_[s].positions;
  for (NodeId sc : src.nodes_[s].children) {
    const NodeId dc = copy_subtree(src, sc);
    nodes_[d].children.push_back(dc);
  }
  return d;
}

void MergedTree::merge_recursive(NodeId d, const MergedTree& src, NodeId s) {
  const Node& sn = src.nodes_[s];
  unite_into(nodes_[d].ids, sn.ids);
  unite_positions(nodes_[d].positions, sn.positions);
  if (sn.children.empty()) return;

  if (nodes_[d].children.size() * sn.children.size() <= kLinearScanLimit) {
    for (NodeId sc : sn.children) {
      NodeId match = kNoNode;
      for (NodeId dc : nodes_[d].children) {
        if (nodes_[dc].label == src.nodes_[sc].label) {
          match = dc;
          break;
        }
      }
      if (match != kNoNode) {
        merge_recursive(match, src, sc);
      } else {
        const NodeId copy = copy_subtree(src, sc);
        nodes_[d].children.push_back(copy);
      }
    }
    return;
  }

  std::unordered_map<LabelId, NodeId> first;
  first.reserve(nodes_[d].children.size());
  for (NodeId dc : nodes_[d].children) first.try_emplace(nodes_[dc].label, dc);
  for (NodeId sc : sn.children) {
    const LabelId label = src.nodes_[sc].label;
    if (auto it = first.find(label); it != first.end()) {
      merge_recursive(it->second, src, sc);
    } else {
      const NodeId copy = copy_subtree(src, sc);
      nodes_[d].children.push_back(copy);
      first.emplace(label, copy);
    }
  }
}

MergedTree merge_trees(MergedTree t, const MergedTree& t2) {
  if (t2.empty()) return t;
  if (t.empty()) return t2;
  if (t.nodes_[0].label != t2.nodes_[0].label) {
    const NodeId copy = t.copy_subtree(t2, 0);
    t.nodes_[0].children.push_back(copy);
    return t;
  }
  t.merge_recursive(0, t2, 0);
  return t;
}

MergedTree merge_all(std::span<const JsonTree> trees, const LabelPool& pool) {
  if (trees.empty()) throw Error(ErrorCode::empty_corpus, "no trees to merge");
  std::vector<MergedTree> level;
  level.reserve((trees.size() + 1) / 2);
  for (std::size_t i = 0; i < trees.size(); i += 2) {
    MergedTree left = MergedTree::from_tree(trees[i], pool);
    if (i + 1 < trees.size()) left = merge_trees(std::move(left), MergedTree::from_tree(trees[i + 1], pool));
    level.push_back(std::move(left));
  }
  while (level.size() > 1) {
    std::vector<MergedTree> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i < level.size(); i += 2) {
      if (i + 1 < level.size()) {
        next.push_back(merge_trees(std::move(level[i]), level[i + 1]));
      } else {
        next.push_back(std::move(level[i]));
      }
      level[i] = MergedTree{};
      if (i + 1 < level.size()) level[i + 1] = MergedTree{};
    }
    level.swap(next);
  }
  return std::move(level.front());
}

MergeStats merge_stats(const MergedTree& mt, std::span<const JsonTree> trees) {
  MergeStats s;
  s.trees = trees.size();
  s.merged_nodes = mt.size();
  for (const auto& t : trees) s.total_nodes += t.size();
  s.leaves = mt.leaf_count();
  return s;
}

}  // namespace jxbw
