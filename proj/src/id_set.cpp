#include "jxbw/id_set.hpp"

#include <algorithm>
#include <iterator>

namespace jxbw {

IdSet unite(std::span<const TreeId> a, std::span<const TreeId> b) {
  IdSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void unite_into(IdSet& into, std::span<const TreeId> other) {
  if (other.empty()) return;
  if (into.empty()) {
    into.assign(other.begin(), other.end());
    return;
  }
  // Divide-and-conquer merging mostly unites disjoint, ordered halves.
  if (into.back() < other.front()) {
    into.insert(into.end(), other.begin(), other.end());
    return;
  }
  into = unite(into, other);
}

IdSet intersect(std::span<const TreeId> a, std::span<const TreeId> b) {
  if (a.size() > b.size()) std::swap(a, b);
  IdSet out(a.begin(), a.end());
  if (a.size() * 16 < b.size()) {
    filter_by(out, b);
    return out;
  }
  out.clear();
  out.reserve(std::min(a.size(), b.size()));
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void filter_by(IdSet& candidates, std::span<const TreeId> set) {
  auto lo = set.begin();
  std::size_t kept = 0;
  for (TreeId id : candidates) {
    // Exponential probe from the last hit, then binary search in the bracket.
    std::size_t step = 1;
    auto hi = lo;
    while (hi != set.end() && *hi < id) {
      lo = hi;
      hi = static_cast<std::size_t>(set.end() - hi) > step ? hi + step : set.end();
      step <<= 1;
    }
    lo = std::lower_bound(lo, hi, id);
    if (lo == set.end()) break;
    if (*lo == id) candidates[kept++] = id;
  }
  candidates.resize(kept);
}

IdSet intersect_all(std::span<const IdSet> sets) {
  if (sets.empty()) return {};
  // Start from the smallest set to keep intermediate results short.
  auto smallest = std::min_element(sets.begin(), sets.end(),
                                   [](const IdSet& x, const IdSet& y) { return x.size() < y.size(); });
  IdSet acc = *smallest;
  for (auto it = sets.begin(); it != sets.end() && !acc.empty(); ++it) {
    if (it == smallest) continue;
    filter_by(acc, *it);
  }
  return acc;
}

void unite_positions(std::vector<ArrayPosition>& into, const std::vector<ArrayPosition>& other) {
  if (other.empty()) return;
  if (into.empty() || into.back() < other.front()) {
    into.insert(into.end(), other.begin(), other.end());
    return;
  }
  std::vector<ArrayPosition> out;
  out.reserve(into.size() + other.size());
  std::set_union(into.begin(), into.end(), other.begin(), other.end(), std::back_inserter(out));
  into = std::move(out);
}

LineBounds advance_bounds(const LineBounds* bounds, std::span<const TreeId> lines,
                          std::span<const ArrayPosition> positions) {
  LineBounds out;
  auto pos = positions.begin();
  auto bound = bounds ? bounds->begin() : LineBounds::const_iterator{};
  for (TreeId line : lines) {
    long long floor = -1;
    if (bounds) {
      bound = std::lower_bound(bound, bounds->end(), line,
                               [](const ArrayPosition& b, TreeId t) { return b.tree < t; });
      if (bound == bounds->end()) break;
      if (bound->tree != line) continue;
      floor = bound->index;
    }
    pos = std::lower_bound(pos, positions.end(), line,
                           [](const ArrayPosition& p, TreeId t) { return p.tree < t; });
    auto it = pos;
    while (it != positions.end() && it->tree == line && static_cast<long long>(it->index) <= floor) ++it;
    if (it != positions.end() && it->tree == line) out.push_back({line, it->index});
  }
  return out;
}

IdSet bound_lines(const LineBounds& bounds) {
  IdSet out;
  out.reserve(bounds.size());
  for (const auto& b : bounds) out.push_back(b.tree);
  return out;
}

}  // namespace jxbw
