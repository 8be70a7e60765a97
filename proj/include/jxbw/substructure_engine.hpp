#ifndef JXBW_SUBSTRUCTURE_ENGINE_HPP
#define JXBW_SUBSTRUCTURE_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "jxbw/id_set.hpp"
#include "jxbw/json_tree.hpp"
#include "jxbw/xbw_index.hpp"

namespace jxbw {

/// Root-to-leaf symbol paths of a query, one per query leaf in DFS order.
struct QueryPaths {
  std::vector<std::vector<Symbol>> paths;
  std::vector<NodeId> leaves;  // query leaf ending each path

  std::size_t p() const noexcept { return paths.size(); }
};

struct QueryStats {
  std::size_t p = 0;       // root-to-leaf paths
  std::size_t r = 0;       // positions matched by the path searches
  std::size_t c = 0;       // candidate roots after ancestor intersection
  double d_avg = 0;        // mean path length
  double b_est = 0;        // mean candidates per child enumeration in step 3
  bool structural = false;  // step 3 used structural matching
};

enum class Strategy {
  adaptive,    // structural matching iff the query contains an array
  structural,  // always structural matching
  paths,       // always path-based collection (ignores array order)
};

/// Three-step substructure search over an XBW index:
///  1. decompose the query into root-to-leaf paths and locate each with
///     subpath_search;
///  2. walk every hit up |P| - 1 parents and intersect the resulting sets of
///     candidate roots over all paths;
///  3. per candidate root, collect line ids either along the query paths or
///     by structural matching (needed for ordered arrays), intersect them per
///     root and unite over roots.
///
/// Array order is checked per line: every array element stores its source
/// index in each line, and a query array matches a line only if its elements
/// can be assigned to strictly increasing indices of that line.
class SubstructureEngine {
 public:
  explicit SubstructureEngine(const XbwIndex& index) : x_(index) {}

  ResultSet search(const QueryTree& q, QueryStats* stats = nullptr, Strategy strategy = Strategy::adaptive) const;

  /// nullopt when a query label is not in the symbol table.
  std::optional<QueryPaths> decompose_paths(const QueryTree& q) const;
  /// Sorted, duplicate-free positions |path| - 1 levels above the path's
  /// final-label positions inside `range`.
  std::vector<Pos> comp_ancestors(PosRange range, std::span<const Symbol> path) const;
  /// One id set per path, or nullopt as soon as a path reaches nothing.
  std::optional<std::vector<IdSet>> collect_path_matching_ids(Pos root, const QueryPaths& paths) const;

  /// Lines in which the query subtree under q_node embeds at cur_pos (empty
  /// when it does not).
  IdSet struct_match(Pos cur_pos, const QueryTree& q, NodeId q_node) const;
  /// Per query child: union over same-label children of cur_pos of struct_match.
  std::vector<IdSet> object_match(Pos cur_pos, const QueryTree& q, NodeId q_node) const;
  /// Lines where the children of q_node occur in order among the elements of
  /// the array at cur_pos; nullopt when the degree check fails.
  std::optional<IdSet> array_match(Pos cur_pos, const QueryTree& q, NodeId q_node) const;

 private:
  struct Context;

  // A non-null filter restricts every returned set to the lines it holds.
  IdSet struct_match(const Context& ctx, Pos cur_pos, NodeId q_node, const IdSet* filter) const;
  // With chain set, children run cheapest first and each one is filtered by
  // the lines matched so far, so the last set is the intersection.
  std::vector<IdSet> object_match(const Context& ctx, Pos cur_pos, NodeId q_node, const IdSet* filter,
                                  bool chain) const;
  std::optional<IdSet> array_match(const Context& ctx, Pos cur_pos, NodeId q_node, const IdSet* filter) const;
  IdSet recursive_array_match(const Context& ctx, Pos cur_pos, std::span<const NodeId> q_children,
                              std::size_t q_idx, const LineBounds* bounds, const IdSet* filter) const;
  // Upper bound on the lines query child qc can match below cur_pos; max()
  // when it cannot be read off leaf set sizes.
  std::size_t estimate(const Context& ctx, Pos cur_pos, NodeId qc) const;
  void reach(Pos root, std::span<const Symbol> path, std::vector<Pos>& out) const;
  IdSet reached_ids(std::span<const Pos> reached) const;
  // Sorted (ancestor, end) for the final-label occurrences k1 < k <= k2.
  std::vector<std::pair<Pos, Pos>> ancestor_pairs(std::uint64_t k1, std::uint64_t k2,
                                                  std::span<const Symbol> path) const;
  // Intersection of the line sets reached by each path; ends[i] lists the
  // positions where path i ends.
  IdSet path_match(std::span<const std::span<const Pos>> ends) const;
  IdSet single_node(Symbol c) const;
  /// Calls f(child) for every child of cur_pos labeled c, in position order.
  template <class F>
  std::size_t for_each_child_with_label(Pos cur_pos, Symbol c, F&& f) const;
  /// Same, memoized per query in ctx.
  template <class F>
  std::size_t for_each_cached(const Context& ctx, Pos cur_pos, Symbol c, F&& f) const;

  const XbwIndex& x_;
};

}  // namespace jxbw

#endif  // JXBW_SUBSTRUCTURE_ENGINE_HPP
