#ifndef JXBW_FLAT_TREE_HPP
#define JXBW_FLAT_TREE_HPP

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace jxbw {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// Immutable ordered labeled tree in preorder with CSR child lists. Node 0 is
/// the root; children keep insertion order.
template <class LabelT>
class FlatTree {
 public:
  class Builder;

  FlatTree() = default;

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  static constexpr NodeId root() noexcept { return 0; }

  const LabelT& label(NodeId v) const { return labels_[v]; }
  const std::vector<LabelT>& labels() const noexcept { return labels_; }
  NodeId parent(NodeId v) const { return parents_[v]; }

  std::span<const NodeId> children(NodeId v) const {
    return {child_list_.data() + child_begin_[v], child_list_.data() + child_begin_[v + 1]};
  }
  std::size_t degree(NodeId v) const { return child_begin_[v + 1] - child_begin_[v]; }
  bool is_leaf(NodeId v) const { return child_begin_[v + 1] == child_begin_[v]; }

  std::size_t leaf_count() const {
    std::size_t n = 0;
    for (NodeId v = 0; v < size(); ++v) n += is_leaf(v);
    return n;
  }

 private:
  std::vector<LabelT> labels_;
  std::vector<NodeId> parents_;
  std::vector<NodeId> child_begin_;
  std::vector<NodeId> child_list_;
};

/// Builds a FlatTree from nested open/close calls (one open per node, in preorder).
template <class LabelT>
class FlatTree<LabelT>::Builder {
 public:
  NodeId open(LabelT label) {
    const auto id = static_cast<NodeId>(labels_.size());
    labels_.push_back(std::move(label));
    parents_.push_back(stack_.empty() ? kNoNode : stack_.back());
    stack_.push_back(id);
    return id;
  }

  void close() { stack_.pop_back(); }
  std::size_t depth() const noexcept { return stack_.size(); }
  std::size_t size() const noexcept { return labels_.size(); }

  FlatTree finish() && {
    FlatTree t;
    const std::size_t n = labels_.size();
    t.child_begin_.assign(n + 1, 0);
    for (std::size_t v = 1; v < n; ++v) ++t.child_begin_[parents_[v] + 1];
    for (std::size_t v = 0; v < n; ++v) t.child_begin_[v + 1] += t.child_begin_[v];
    t.child_list_.resize(n == 0 ? 0 : n - 1);
    std::vector<NodeId> fill(t.child_begin_.begin(), t.child_begin_.end() - (n == 0 ? 0 : 1));
    for (std::size_t v = 1; v < n; ++v) t.child_list_[fill[parents_[v]]++] = static_cast<NodeId>(v);
    t.labels_ = std::move(labels_);
    t.parents_ = std::move(parents_);
    return t;
  }

 private:
  std::vector<LabelT> labels_;
  std::vector<NodeId> parents_;
  std::vector<NodeId> stack_;
};

}  // namespace jxbw

#endif  // JXBW_FLAT_TREE_HPP
