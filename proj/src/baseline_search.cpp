#include "jxbw/baseline_search.hpp"

#include <algorithm>

namespace jxbw {
namespace {

// Kuhn's augmenting-path bipartite matching: can every query child get its
// own data child?
class Matcher {
 public:
  explicit Matcher(std::vector<std::vector<std::size_t>> adj, std::size_t right)
      : adj_(std::move(adj)), owner_(right, kFree) {}

  bool perfect() {
    for (std::size_t l = 0; l < adj_.size(); ++l) {
      seen_.assign(owner_.size(), false);
      if (!augment(l)) return false;
    }
    return true;
  }

 private:
  static constexpr std::size_t kFree = static_cast<std::size_t>(-1);

  bool augment(std::size_t l) {
    for (std::size_t r : adj_[l]) {
      if (seen_[r]) continue;
      seen_[r] = true;
      if (owner_[r] == kFree || augment(owner_[r])) {
        owner_[r] = l;
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> owner_;
  std::vector<bool> seen_;
};

bool embeds(const JsonTree& t, NodeId v, const QueryTree& q, NodeId qn, const std::vector<LabelId>& qlab) {
  if (t.label(v) != qlab[qn]) return false;
  const auto qkids = q.children(qn);
  if (qkids.empty()) return true;
  const auto kids = t.children(v);
  if (kids.size() < qkids.size()) return false;
  if (q.label(qn).kind == LabelKind::array) {
    std::size_t j = 0;
    for (NodeId qc : qkids) {
      while (j < kids.size() && !embeds(t, kids[j], q, qc, qlab)) ++j;
      if (j == kids.size()) return false;
      ++j;
    }
    return true;
  }
  std::vector<std::vector<std::size_t>> adj(qkids.size());
  for (std::size_t a = 0; a < qkids.size(); ++a) {
    for (std::size_t b = 0; b < kids.size(); ++b) {
      if (embeds(t, kids[b], q, qkids[a], qlab)) adj[a].push_back(b);
    }
    if (adj[a].empty()) return false;
  }
  return Matcher(std::move(adj), kids.size()).perfect();
}

std::optional<std::vector<LabelId>> query_labels(const LabelPool& pool, const QueryTree& q) {
  std::vector<LabelId> out(q.size());
  for (NodeId v = 0; v < q.size(); ++v) {
    const auto id = pool.find(q.label(v));
    if (!id) return std::nullopt;
    out[v] = *id;
  }
  return out;
}

}  // namespace

bool embeds_at(const JsonTree& tree, const LabelPool& pool, NodeId v, const QueryTree& q, NodeId q_node) {
  const auto qlab = query_labels(pool, q);
  return qlab && embeds(tree, v, q, q_node, *qlab);
}

ResultSet naive_search(std::span<const JsonTree> trees, const LabelPool& pool, const QueryTree& q) {
  ResultSet out;
  if (q.empty()) return out;
  const auto qlab = query_labels(pool, q);
  if (!qlab) return out;
  const LabelId root = (*qlab)[QueryTree::root()];
  for (const auto& t : trees) {
    for (NodeId v = 0; v < t.size(); ++v) {
      if (t.label(v) == root && embeds(t, v, q, QueryTree::root(), *qlab)) {
        out.push_back(t.id());
        break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------- merged tree

struct MergedTreeSearcher::Context {
  const QueryTree& q;
  std::vector<LabelId> lab;
  std::vector<std::vector<NodeId>> sorted_q;  // query children by Label (objects/keys)
};

MergedTreeSearcher::MergedTreeSearcher(const MergedTree& mt, const LabelPool& pool)
    : mt_(mt), pool_(pool), sorted_children_(mt.size()) {
  for (NodeId v = 0; v < mt.size(); ++v) {
    const auto& n = mt.node(v);
    if (n.children.empty() || pool[n.label].kind == LabelKind::array) continue;
    auto& kids = sorted_children_[v];
    kids = n.children;
    std::stable_sort(kids.begin(), kids.end(),
                     [&](NodeId a, NodeId b) { return pool[mt.node(a).label] < pool[mt.node(b).label]; });
  }
}

std::optional<MergedTreeSearcher::Context> MergedTreeSearcher::make_context(const QueryTree& q) const {
  Context ctx{q, std::vector<LabelId>(q.size()), std::vector<std::vector<NodeId>>(q.size())};
  for (NodeId v = 0; v < q.size(); ++v) {
    const auto id = pool_.find(q.label(v));
    if (!id) return std::nullopt;
    ctx.lab[v] = *id;
    const auto kids = q.children(v);
    ctx.sorted_q[v].assign(kids.begin(), kids.end());
    std::stable_sort(ctx.sorted_q[v].begin(), ctx.sorted_q[v].end(),
                     [&](NodeId a, NodeId b) { return q.label(a) < q.label(b); });
  }
  return ctx;
}

std::vector<NodeId> MergedTreeSearcher::find_candidates(const Label& label) const {
  std::vector<NodeId> out;
  const auto id = pool_.find(label);
  if (!id || mt_.empty()) return out;
  std::vector<NodeId> stack{MergedTree::root()};
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    const auto& n = mt_.node(v);
    if (n.label == *id) out.push_back(v);
    stack.insert(stack.end(), n.children.rbegin(), n.children.rend());
  }
  return out;
}

IdSet MergedTreeSearcher::match_array(const Context& ctx, NodeId mt_node, std::span<const NodeId> q_children,
                                      std::size_t q_idx, const LineBounds* bounds) const {
  if (q_idx == q_children.size()) return bounds ? bound_lines(*bounds) : IdSet{};
  IdSet result;
  const NodeId qc = q_children[q_idx];
  for (NodeId child : mt_.node(mt_node).children) {
    if (mt_.node(child).label != ctx.lab[qc]) continue;
    const auto sets = match_subtree(ctx, child, qc);
    if (!sets) continue;
    const IdSet lines = intersect_all(*sets);
    if (lines.empty()) continue;
    const LineBounds advanced = advance_bounds(bounds, lines, mt_.node(child).positions);
    if (advanced.empty()) continue;
    unite_into(result, match_array(ctx, mt_node, q_children, q_idx + 1, &advanced));
  }
  return result;
}

std::optional<std::vector<IdSet>> MergedTreeSearcher::match_subtree(const Context& ctx, NodeId mt_node,
                                                                    NodeId q_node) const {
  const auto& n = mt_.node(mt_node);
  if (n.label != ctx.lab[q_node]) return std::nullopt;
  const auto qkids = ctx.q.children(q_node);
  if (qkids.empty()) {
    if (n.children.empty()) return std::vector<IdSet>{n.ids};
    return std::vector<IdSet>{mt_.subtree_ids(mt_node)};
  }
  if (n.children.empty()) return std::nullopt;

  if (ctx.q.label(q_node).kind == LabelKind::array) {
    IdSet lines = match_array(ctx, mt_node, qkids, 0, nullptr);
    if (lines.empty()) return std::nullopt;
    return std::vector<IdSet>{std::move(lines)};
  }

  // Two-pointer scan over label-sorted children.
  const auto& mkids = sorted_children_[mt_node];
  const auto& skids = ctx.sorted_q[q_node];
  std::vector<IdSet> all;
  std::size_t qi = 0, mi = 0;
  while (qi < skids.size() && mi < mkids.size()) {
    const NodeId qc = skids[qi];
    const NodeId mc = mkids[mi];
    if (mt_.node(mc).label == ctx.lab[qc]) {
      auto sets = match_subtree(ctx, mc, qc);
      if (!sets) return std::nullopt;
      for (auto& s : *sets) all.push_back(std::move(s));
      ++qi;
    }
    ++mi;
  }
  if (qi < skids.size()) return std::nullopt;
  return all;
}

std::optional<std::vector<IdSet>> MergedTreeSearcher::match_subtree(NodeId mt_node, const QueryTree& q,
                                                                    NodeId q_node) const {
  const auto ctx = make_context(q);
  if (!ctx) return std::nullopt;
  return match_subtree(*ctx, mt_node, q_node);
}

ResultSet MergedTreeSearcher::search(const QueryTree& q) const {
  ResultSet out;
  if (q.empty() || mt_.empty()) return out;
  const auto ctx = make_context(q);
  if (!ctx) return out;
  for (NodeId cand : find_candidates(q.label(QueryTree::root()))) {
    const auto sets = match_subtree(*ctx, cand, QueryTree::root());
    if (!sets) continue;
    unite_into(out, intersect_all(*sets));
  }
  return out;
}

ResultSet mt_search(const MergedTree& mt, const LabelPool& pool, const QueryTree& q) {
  return MergedTreeSearcher(mt, pool).search(q);
}

}  // namespace jxbw
