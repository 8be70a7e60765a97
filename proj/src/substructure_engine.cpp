#include "jxbw/substructure_engine.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace jxbw {

struct SubstructureEngine::Context {
  struct KeyHash {
    std::size_t operator()(const std::pair<Pos, Symbol>& k) const noexcept {
      return std::hash<std::uint64_t>{}(k.first * 0x9E3779B97F4A7C15ull ^ k.second);
    }
  };

  const QueryTree& q;
  std::vector<Symbol> sym;  // query node -> symbol
  mutable std::size_t enumerations = 0;
  mutable std::size_t candidates = 0;
  // Children of a position carrying a symbol, shared by estimates and matches.
  mutable std::unordered_map<std::pair<Pos, Symbol>, std::vector<Pos>, KeyHash> kids;
};

namespace {

bool has_array(const QueryTree& q) {
  return std::any_of(q.labels().begin(), q.labels().end(),
                     [](const Label& l) { return l.kind == LabelKind::array; });
}

template <class T>
void normalize_set(std::vector<T>& ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

}  // namespace

template <class F>
std::size_t SubstructureEngine::for_each_child_with_label(Pos cur_pos, Symbol c, F&& f) const {
  const auto range = x_.children(cur_pos);
  if (!range || c == 0) return 0;
  const std::uint64_t y1 = x_.rank(c, range->first - 1);
  const std::uint64_t y2 = x_.rank(c, range->last);
  for (std::uint64_t k = y1 + 1; k <= y2; ++k) f(x_.select(c, k));
  return y2 - y1;
}

template <class F>
std::size_t SubstructureEngine::for_each_cached(const Context& ctx, Pos cur_pos, Symbol c, F&& f) const {
  auto [it, fresh] = ctx.kids.try_emplace({cur_pos, c});
  if (fresh) for_each_child_with_label(cur_pos, c, [&](Pos p) { it->second.push_back(p); });
  for (Pos p : it->second) f(p);
  return it->second.size();
}

std::optional<QueryPaths> SubstructureEngine::decompose_paths(const QueryTree& q) const {
  QueryPaths out;
  if (q.empty()) return out;
  std::vector<Symbol> sym(q.size());
  for (NodeId v = 0; v < q.size(); ++v) {
    const auto s = x_.symbols().find(q.label(v));
    if (!s) return std::nullopt;
    sym[v] = *s;
  }
  std::vector<Symbol> path;
  std::vector<std::pair<NodeId, std::size_t>> stack{{QueryTree::root(), 0}};
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next == 0) path.push_back(sym[v]);
    const auto kids = q.children(v);
    if (kids.empty()) {
      out.paths.push_back(path);
      out.leaves.push_back(v);
    }
    if (next < kids.size()) {
      const NodeId child = kids[next++];
      stack.emplace_back(child, 0);
      continue;
    }
    path.pop_back();
    stack.pop_back();
  }
  return out;
}

std::vector<std::pair<Pos, Pos>> SubstructureEngine::ancestor_pairs(std::uint64_t k1, std::uint64_t k2,
                                                                     std::span<const Symbol> path) const {
  std::vector<std::pair<Pos, Pos>> out;
  if (path.empty()) return out;
  const Symbol c = path.back();
  out.reserve(k2 - k1);
  for (std::uint64_t k = k1 + 1; k <= k2; ++k) {
    const Pos end = x_.select(c, k);
    std::optional<Pos> pos = end;
    for (std::size_t j = 1; j < path.size() && pos; ++j) pos = x_.parent(*pos);
    if (pos) out.emplace_back(*pos, end);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Pos> SubstructureEngine::comp_ancestors(PosRange range, std::span<const Symbol> path) const {
  std::vector<Pos> out;
  if (path.empty() || range.first > range.last) return out;
  const Symbol c = path.back();
  for (const auto& [root, end] : ancestor_pairs(x_.rank(c, range.first - 1), x_.rank(c, range.last), path)) {
    if (out.empty() || out.back() != root) out.push_back(root);
  }
  return out;
}

void SubstructureEngine::reach(Pos root, std::span<const Symbol> path, std::vector<Pos>& out) const {
  out.assign(1, root);
  std::vector<Pos> next;
  // root already carries path[0]; descend from the second label.
  for (std::size_t i = 1; i < path.size() && !out.empty(); ++i) {
    next.clear();
    for (Pos cur : out) for_each_child_with_label(cur, path[i], [&](Pos p) { next.push_back(p); });
    out.swap(next);
  }
}

IdSet SubstructureEngine::reached_ids(std::span<const Pos> reached) const {
  IdSet ids;
  for (Pos p : reached) {
    // A query leaf matched at an inner node: every line reaching it.
    if (x_.is_leaf(p)) {
      unite_into(ids, x_.tree_ids(p));
    } else {
      unite_into(ids, x_.subtree_ids(p));
    }
  }
  return ids;
}

std::optional<std::vector<IdSet>> SubstructureEngine::collect_path_matching_ids(Pos root,
                                                                                  const QueryPaths& paths) const {
  std::vector<IdSet> sets;
  sets.reserve(paths.p());
  std::vector<Pos> reached;
  for (const auto& path : paths.paths) {
    reach(root, path, reached);
    IdSet ids = reached_ids(reached);
    if (ids.empty()) return std::nullopt;
    sets.push_back(std::move(ids));
  }
  return sets;
}

IdSet SubstructureEngine::path_match(std::span<const std::span<const Pos>> ends) const {
  // Lines per path stay views into the index when a path ends at one leaf;
  // they are intersected smallest first so large sets are only probed.
  std::vector<IdSet> owned;
  owned.reserve(ends.size());
  std::vector<std::span<const TreeId>> sets;
  sets.reserve(ends.size());
  for (const auto& reached : ends) {
    if (reached.empty()) return {};
    if (reached.size() == 1 && x_.is_leaf(reached.front())) {
      sets.push_back(x_.tree_ids(reached.front()));
    } else {
      owned.push_back(reached_ids(reached));
      sets.push_back(owned.back());
    }
    if (sets.back().empty()) return {};
  }
  std::sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  IdSet acc(sets.front().begin(), sets.front().end());
  for (std::size_t i = 1; i < sets.size() && !acc.empty(); ++i) filter_by(acc, sets[i]);
  return acc;
}

IdSet SubstructureEngine::struct_match(const Context& ctx, Pos cur_pos, NodeId q_node, const IdSet* filter) const {
  if (x_.label(cur_pos) != ctx.sym[q_node]) return {};
  if (ctx.q.is_leaf(q_node)) {
    if (x_.is_leaf(cur_pos)) {
      const auto ids = x_.tree_ids(cur_pos);
      return filter ? intersect(*filter, ids) : IdSet(ids.begin(), ids.end());
    }
    IdSet ids = x_.subtree_ids(cur_pos);
    if (filter) filter_by(ids, *filter);
    return ids;
  }
  if (ctx.q.label(q_node).kind == LabelKind::array) {
    auto ids = array_match(ctx, cur_pos, q_node, filter);
    return ids ? std::move(*ids) : IdSet{};
  }
  auto per_child = object_match(ctx, cur_pos, q_node, filter, true);
  // Chained matching: each set is already restricted to the previous ones.
  if (per_child.empty() || per_child.back().empty()) return {};
  return std::move(per_child.back());
}

std::size_t SubstructureEngine::estimate(const Context& ctx, Pos cur_pos, NodeId qc) const {
  constexpr std::size_t unknown = std::numeric_limits<std::size_t>::max();
  std::size_t total = 0;
  bool known = true;
  const auto grandchildren = ctx.q.children(qc);
  for_each_cached(ctx, cur_pos, ctx.sym[qc], [&](Pos p) {
    if (grandchildren.empty()) {
      if (x_.is_leaf(p)) {
        total += x_.tree_ids(p).size();
      } else {
        known = false;
      }
    } else if (grandchildren.size() == 1 && ctx.q.is_leaf(grandchildren.front())) {
      // Key with a scalar value: size of the value's id set.
      for_each_cached(ctx, p, ctx.sym[grandchildren.front()], [&](Pos v) {
        if (x_.is_leaf(v)) {
          total += x_.tree_ids(v).size();
        } else {
          known = false;
        }
      });
    } else {
      known = false;
    }
  });
  return known ? total : unknown;
}

std::vector<IdSet> SubstructureEngine::object_match(const Context& ctx, Pos cur_pos, NodeId q_node,
                                                    const IdSet* filter, bool chain) const {
  const auto kids = ctx.q.children(q_node);
  std::vector<NodeId> order(kids.begin(), kids.end());
  if (chain && order.size() > 1) {
    std::vector<std::size_t> est(ctx.q.size());
    for (NodeId qc : order) est[qc] = estimate(ctx, cur_pos, qc);
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return est[a] < est[b]; });
  }
  std::vector<IdSet> out;
  const IdSet* running = filter;
  for (NodeId qc : order) {
    IdSet child_ids;
    ++ctx.enumerations;
    ctx.candidates += for_each_cached(ctx, cur_pos, ctx.sym[qc], [&](Pos p) {
      unite_into(child_ids, struct_match(ctx, p, qc, running));
    });
    // An empty set makes the caller's intersection empty; stop early.
    const bool failed = child_ids.empty();
    out.push_back(std::move(child_ids));
    if (failed) break;
    if (chain) running = &out.back();
  }
  return out;
}

std::optional<IdSet> SubstructureEngine::array_match(const Context& ctx, Pos cur_pos, NodeId q_node,
                                                     const IdSet* filter) const {
  const auto q_children = ctx.q.children(q_node);
  if (x_.degree(cur_pos) < q_children.size()) return std::nullopt;
  IdSet ids = recursive_array_match(ctx, cur_pos, q_children, 0, nullptr, filter);
  if (ids.empty()) return std::nullopt;
  return ids;
}

IdSet SubstructureEngine::recursive_array_match(const Context& ctx, Pos cur_pos, std::span<const NodeId> q_children,
                                                std::size_t q_idx, const LineBounds* bounds,
                                                const IdSet* filter) const {
  if (q_idx == q_children.size()) return bounds ? bound_lines(*bounds) : IdSet{};
  IdSet alive;
  if (bounds) {
    alive = bound_lines(*bounds);
    filter = &alive;
  }
  IdSet result;
  const NodeId qc = q_children[q_idx];
  ++ctx.enumerations;
  ctx.candidates += for_each_cached(ctx, cur_pos, ctx.sym[qc], [&](Pos child) {
    const IdSet current = struct_match(ctx, child, qc, filter);
    if (current.empty()) return;
    const LineBounds advanced = advance_bounds(bounds, current, x_.array_positions(child));
    if (advanced.empty()) return;
    unite_into(result, recursive_array_match(ctx, cur_pos, q_children, q_idx + 1, &advanced, nullptr));
  });
  return result;
}

IdSet SubstructureEngine::single_node(Symbol c) const {
  IdSet out;
  const std::uint64_t total = x_.count(c);
  const bool container = x_.internal_count(c) > 0;
  std::vector<bool> visited(container ? x_.size() + 1 : 0, false);
  std::vector<Pos> stack;
  for (std::uint64_t k = 1; k <= total; ++k) {
    const Pos p = x_.select(c, k);
    if (x_.is_leaf(p)) {
      const auto ids = x_.tree_ids(p);
      out.insert(out.end(), ids.begin(), ids.end());
      continue;
    }
    // Inner occurrence: every line reaching it; skip subtrees already covered.
    stack.assign(1, p);
    while (!stack.empty()) {
      const Pos u = stack.back();
      stack.pop_back();
      if (visited[u]) continue;
      visited[u] = true;
      const auto ids = x_.node_ids(u);
      out.insert(out.end(), ids.begin(), ids.end());
      if (const auto range = x_.children(u)) {
        for (Pos v = range->first; v <= range->last; ++v) {
          if (!visited[v]) stack.push_back(v);
        }
      }
    }
  }
  normalize_set(out);
  return out;
}

ResultSet SubstructureEngine::search(const QueryTree& q, QueryStats* stats, Strategy strategy) const {
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  st = QueryStats{};
  if (q.empty()) return {};

  // Step 1: paths and their ranges.
  const auto paths = decompose_paths(q);
  if (!paths) return {};
  st.p = paths->p();
  std::size_t depth_sum = 0;
  for (const auto& p : paths->paths) depth_sum += p.size();
  st.d_avg = st.p ? double(depth_sum) / double(st.p) : 0.0;

  if (q.size() == 1) {
    const Symbol c = paths->paths.front().front();
    ResultSet out = single_node(c);
    st.r = x_.count(c);
    st.c = st.r;
    return out;
  }

  // Every path has at least two labels here. The occurrence ranks of the
  // final label delimit the same nodes as the subpath range.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranks;
  ranks.reserve(st.p);
  for (const auto& p : paths->paths) {
    const auto r = x_.subpath_ranks(p);
    if (!r) return {};
    ranks.push_back(*r);
  }

  // Step 2: candidate roots reachable by every path, with the path ends
  // below each of them.
  std::vector<std::vector<std::pair<Pos, Pos>>> pairs(st.p);
  std::vector<Pos> roots;
  for (std::size_t i = 0; i < st.p; ++i) {
    st.r += ranks[i].second - ranks[i].first;
    pairs[i] = ancestor_pairs(ranks[i].first, ranks[i].second, paths->paths[i]);
    std::vector<Pos> anc;
    for (const auto& pr : pairs[i]) {
      if (anc.empty() || anc.back() != pr.first) anc.push_back(pr.first);
    }
    if (i == 0) {
      roots = std::move(anc);
    } else {
      std::vector<Pos> both;
      std::set_intersection(roots.begin(), roots.end(), anc.begin(), anc.end(), std::back_inserter(both));
      roots.swap(both);
    }
    if (roots.empty()) return {};
  }
  st.c = roots.size();

  // Step 3: per-root collection.
  const bool structural =
      strategy == Strategy::structural || (strategy == Strategy::adaptive && has_array(q));
  st.structural = structural;
  Context ctx{q, {}};
  if (structural) {
    ctx.sym.resize(q.size());
    for (NodeId v = 0; v < q.size(); ++v) ctx.sym[v] = *x_.symbols().find(q.label(v));
  }
  ResultSet result;
  std::vector<std::vector<Pos>> ends(st.p);
  std::vector<std::span<const Pos>> views(st.p);
  for (Pos root : roots) {
    IdSet ids;
    if (structural) {
      ids = struct_match(ctx, root, QueryTree::root(), nullptr);
    } else {
      ++ctx.enumerations;
      // The ends found in step 2 are exactly the nodes a descent from root
      // along the path labels would reach.
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto lo = std::lower_bound(pairs[i].begin(), pairs[i].end(), std::pair<Pos, Pos>{root, 0});
        ends[i].clear();
        for (auto it = lo; it != pairs[i].end() && it->first == root; ++it) ends[i].push_back(it->second);
        views[i] = ends[i];
      }
      ctx.candidates += st.p;
      ids = path_match(views);
    }
    unite_into(result, ids);
  }
  if (ctx.enumerations) st.b_est = double(ctx.candidates) / double(ctx.enumerations);
  return result;
}

IdSet SubstructureEngine::struct_match(Pos cur_pos, const QueryTree& q, NodeId q_node) const {
  Context ctx{q, {}};
  ctx.sym.resize(q.size());
  for (NodeId v = 0; v < q.size(); ++v) {
    const auto s = x_.symbols().find(q.label(v));
    if (!s) return {};
    ctx.sym[v] = *s;
  }
  return struct_match(ctx, cur_pos, q_node, nullptr);
}

std::vector<IdSet> SubstructureEngine::object_match(Pos cur_pos, const QueryTree& q, NodeId q_node) const {
  Context ctx{q, {}};
  ctx.sym.resize(q.size());
  for (NodeId v = 0; v < q.size(); ++v) ctx.sym[v] = x_.symbols().find(q.label(v)).value_or(0);
  return object_match(ctx, cur_pos, q_node, nullptr, false);
}

std::optional<IdSet> SubstructureEngine::array_match(Pos cur_pos, const QueryTree& q, NodeId q_node) const {
  Context ctx{q, {}};
  ctx.sym.resize(q.size());
  for (NodeId v = 0; v < q.size(); ++v) ctx.sym[v] = x_.symbols().find(q.label(v)).value_or(0);
  return array_match(ctx, cur_pos, q_node, nullptr);
}

}  // namespace jxbw
