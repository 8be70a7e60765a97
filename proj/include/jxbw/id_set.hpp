#ifndef JXBW_ID_SET_HPP
#define JXBW_ID_SET_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace jxbw {

/// Tree identifier: the 1-based line number of a JSONL record.
using TreeId = std::uint32_t;

/// Sorted, duplicate-free set of tree identifiers.
using IdSet = std::vector<TreeId>;

/// Matching tree identifiers returned by every search algorithm.
using ResultSet = IdSet;

/// Source position of an array element inside one line: the element was the
/// `index`-th (0-based) child of its array in tree `tree`.
struct ArrayPosition {
  TreeId tree;
  std::uint32_t index;

  friend bool operator==(const ArrayPosition&, const ArrayPosition&) = default;
  friend auto operator<=>(const ArrayPosition&, const ArrayPosition&) = default;
};

IdSet unite(std::span<const TreeId> a, std::span<const TreeId> b);
void unite_into(IdSet& into, std::span<const TreeId> other);
IdSet intersect(std::span<const TreeId> a, std::span<const TreeId> b);
/// Removes from `candidates` every id missing in `set`. Gallops through
/// `set`, so the cost follows the candidate count when `set` is large.
void filter_by(IdSet& candidates, std::span<const TreeId> set);

/// Intersection of a non-empty collection; an empty collection yields an empty set.
IdSet intersect_all(std::span<const IdSet> sets);

/// Sorted union of two ArrayPosition lists (duplicates removed).
void unite_positions(std::vector<ArrayPosition>& into, const std::vector<ArrayPosition>& other);

/// Per-line lower bound used while matching array elements in order: the
/// element matched last for `tree` sat at source index `index`.
using LineBounds = std::vector<ArrayPosition>;

/// Advances an ordered array match by one element.
///
/// Keeps the lines of `lines` that (a) are still alive in `bounds` (all lines
/// are alive when `bounds` is null) and (b) have an occurrence in `positions`
/// strictly after their bound. The new bound of each surviving line is its
/// smallest such occurrence, which is the greedy choice for subsequence
/// matching.
LineBounds advance_bounds(const LineBounds* bounds, std::span<const TreeId> lines,
                          std::span<const ArrayPosition> positions);

IdSet bound_lines(const LineBounds& bounds);

}  // namespace jxbw

#endif  // JXBW_ID_SET_HPP
