#ifndef JXBW_SYMBOL_TABLE_HPP
#define JXBW_SYMBOL_TABLE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "jxbw/flat_tree.hpp"
#include "jxbw/json_tree.hpp"
#include "jxbw/label.hpp"
#include "jxbw/merged_tree.hpp"

namespace jxbw {

/// Integer stand-in for a label, 1..sigma. 0 is reserved for "no label"
/// (the parent of the root).
using Symbol = std::uint32_t;

/// How symbols are numbered.
///  - label: symbol order equals Label order, so sorting by symbol sorts by label.
///  - first_occurrence: symbols follow a depth-first walk of the merged tree
///    (object members by label, array elements in source order). This is the
///    lettering used in the classic worked example (A = Object, B = "hobbies", ...).
enum class SymbolOrder : std::uint8_t { label = 0, first_occurrence = 1 };

class SymbolTable {
 public:
  SymbolTable() = default;

  /// Sorts and deduplicates `labels`; symbols follow Label order.
  static SymbolTable from_labels(std::vector<Label> labels);
  /// Keeps the given order (first copy of a duplicate wins).
  static SymbolTable from_ordered(std::span<const Label> labels, SymbolOrder order);

  std::size_t sigma() const noexcept { return pool_.size(); }
  SymbolOrder order() const noexcept { return order_; }

  /// Throws OUT_OF_RANGE unless 1 <= s <= sigma().
  const Label& label(Symbol s) const;
  std::optional<Symbol> find(const Label& label) const;
  /// Throws UNKNOWN_LABEL.
  Symbol symbol(const Label& label) const;

  /// Symbol of every id of `pool`, 0 where the label is not in the table.
  std::vector<Symbol> map_pool(const LabelPool& pool) const;

 private:
  LabelPool pool_;
  SymbolOrder order_ = SymbolOrder::label;
};

/// Table over every label occurring in `trees`, in Label order.
SymbolTable build_symbol_table(std::span<const JsonTree> trees, const LabelPool& pool);
/// Table over every label of the merged tree.
SymbolTable build_symbol_table(const MergedTree& mt, const LabelPool& pool,
                               SymbolOrder order = SymbolOrder::label);

/// Merged tree with symbol labels and children stably sorted by symbol.
/// `origin[v]` is the merged-tree node that normalized node v came from.
struct NormalizedTree {
  FlatTree<Symbol> tree;
  std::vector<NodeId> origin;
};

/// Throws UNKNOWN_LABEL when a label is missing from the table.
NormalizedTree normalize(const MergedTree& mt, const LabelPool& pool, const SymbolTable& table);
NormalizedTree normalize(const JsonTree& tree, const LabelPool& pool, const SymbolTable& table);

}  // namespace jxbw

#endif  // JXBW_SYMBOL_TABLE_HPP
