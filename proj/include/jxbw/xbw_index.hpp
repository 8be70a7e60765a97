#ifndef JXBW_XBW_INDEX_HPP
#define JXBW_XBW_INDEX_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jxbw/id_set.hpp"
#include "jxbw/id_store.hpp"
#include "jxbw/merged_tree.hpp"
#include "jxbw/succinct/int_vector.hpp"
#include "jxbw/succinct/rank_select.hpp"
#include "jxbw/succinct/wavelet_matrix.hpp"
#include "jxbw/symbol_table.hpp"

namespace jxbw {

/// 1-based position in the XBW arrays.
using Pos = std::uint64_t;

struct PosRange {
  Pos first = 0;
  Pos last = 0;

  std::uint64_t size() const noexcept { return last >= first ? last - first + 1 : 0; }
  friend bool operator==(const PosRange&, const PosRange&) = default;
};

/// Byte sizes of the serialized sections, in file order.
struct SectionSizes {
  std::uint64_t header = 0;
  std::uint64_t symbols = 0;
  std::uint64_t a_last = 0;
  std::uint64_t a_leaf = 0;
  std::uint64_t a_diff = 0;
  std::uint64_t a_label = 0;
  std::uint64_t a_pf = 0;
  std::uint64_t f_table = 0;
  std::uint64_t ids = 0;
  std::uint64_t residual_ids = 0;
  std::uint64_t array_positions = 0;
  std::uint64_t checksum = 0;

  std::uint64_t total() const noexcept {
    return header + symbols + a_last + a_leaf + a_diff + a_label + a_pf + f_table + ids + residual_ids +
           array_positions + checksum;
  }
};

/// XBW transform of a merged JSON tree.
///
/// Nodes are ordered by their upward label sequence (parent, grandparent, ...,
/// root), ties kept in depth-first order, so the children of every node form
/// one contiguous sibling block and all nodes whose parent carries label c sit
/// in [F(c), F(c+1) - 1]. Stored arrays:
///   A_label  wavelet matrix of node symbols
///   A_pf     wavelet matrix of parent symbols (0 for the root)
///   A_last   1 at the last child of each sibling block
///   A_leaf   1 at leaves
///   A_diff   1 where the upward label sequence changes
///   F        first position per parent symbol, F(sigma + 1) = n + 1
///   A_ids    id set per leaf, addressed by leaf rank
/// plus ids kept at internal nodes (lines whose value there was an empty
/// container) and the per-line source index of every array element.
///
/// Ranks used to locate sibling blocks count internal nodes only: a leaf owns
/// no block, so it must not shift the block of a later same-label node.
class XbwIndex {
 public:
  XbwIndex() = default;

  std::uint64_t size() const noexcept { return n_; }
  std::size_t sigma() const noexcept { return symbols_.sigma(); }
  const SymbolTable& symbols() const noexcept { return symbols_; }
  std::uint64_t leaf_count() const noexcept { return a_leaf_.ones(); }
  /// Symbol of the ARRAY label, 0 when the corpus has no arrays.
  Symbol array_symbol() const noexcept { return array_symbol_; }

  Symbol label(Pos i) const { return a_label_.access(i); }
  Symbol parent_label(Pos i) const { return a_pf_.access(i); }
  bool is_leaf(Pos i) const { return a_leaf_.access(i); }
  bool is_last(Pos i) const { return a_last_.access(i); }
  bool diff(Pos i) const { return a_diff_.access(i); }
  /// F(c) for 0 <= c <= sigma + 1.
  Pos first_with_parent(Symbol c) const;

  /// Occurrences of c in A_label[1..i].
  std::uint64_t rank(Symbol c, Pos i) const { return a_label_.rank(c, i); }
  std::uint64_t count(Symbol c) const;
  /// Position of the k-th c. Throws NOT_ENOUGH_OCCURRENCES.
  Pos select(Symbol c, std::uint64_t k) const;
  /// Internal (non-leaf) nodes labeled c in A_label[1..i].
  std::uint64_t internal_rank(Symbol c, Pos i) const;
  std::uint64_t internal_count(Symbol c) const;
  /// Position of the k-th internal node labeled c. Throws NOT_ENOUGH_OCCURRENCES.
  Pos select_internal(Symbol c, std::uint64_t k) const;

  /// Child block of i; nullopt for a leaf. Throws OUT_OF_RANGE.
  std::optional<PosRange> children(Pos i) const;
  std::uint64_t degree(Pos i) const;
  /// k-th child (1-based). Throws NO_SUCH_CHILD.
  Pos ranked_child(Pos i, std::uint64_t k) const;
  /// k-th child of i labeled c, nullopt when there is none.
  std::optional<Pos> char_ranked_child(Pos i, Symbol c, std::uint64_t k) const;
  /// nullopt for the root. Throws OUT_OF_RANGE.
  std::optional<Pos> parent(Pos i) const;

  /// Id set of leaf i. Throws NOT_A_LEAF.
  std::span<const TreeId> tree_ids(Pos i) const;
  /// Ids stored at i: tree_ids for a leaf, ids of empty-container lines otherwise.
  std::span<const TreeId> node_ids(Pos i) const;
  /// Union of node_ids over the subtree of i.
  IdSet subtree_ids(Pos i) const;
  /// Per-line source indices of node i inside its parent array (empty unless
  /// the parent is an ARRAY node).
  std::span<const ArrayPosition> array_positions(Pos i) const;

  /// Positions reached by the label path P from any starting node: the range
  /// spans the first and last p_k-labeled node reachable through p_1 ... p_k.
  /// An empty path yields [1, n] and a single label c the block [F(c), F(c+1) - 1]
  /// of nodes whose parent is labeled c; nullopt when nothing matches.
  std::optional<PosRange> subpath_search(std::span<const Symbol> path) const;
  /// Occurrence ranks (k1, k2] of path.back() reached through the path, so
  /// the reached nodes are select(path.back(), k) for k1 < k <= k2. A single
  /// label yields all its occurrences; nullopt when nothing matches.
  std::optional<std::pair<std::uint64_t, std::uint64_t>> subpath_ranks(std::span<const Symbol> path) const;

  std::string serialize() const;
  static XbwIndex deserialize(std::string_view bytes);
  void save(const std::filesystem::path& path) const;
  static XbwIndex load(const std::filesystem::path& path);
  SectionSizes section_sizes() const;

  const succinct::WaveletMatrix& a_label() const noexcept { return a_label_; }
  const succinct::WaveletMatrix& a_pf() const noexcept { return a_pf_; }
  const succinct::RankSelectBits& a_last() const noexcept { return a_last_; }
  const succinct::RankSelectBits& a_leaf() const noexcept { return a_leaf_; }
  const succinct::RankSelectBits& a_diff() const noexcept { return a_diff_; }
  const std::vector<Pos>& f_table() const noexcept { return f_; }

  friend XbwIndex build_xbw(const NormalizedTree& tree, const MergedTree& mt, SymbolTable symbols);

 private:
  void derive();
  void check_pos(Pos i) const;
  std::string serialize(SectionSizes* sizes) const;

  std::uint64_t n_ = 0;
  SymbolTable symbols_;
  succinct::WaveletMatrix a_label_;
  succinct::WaveletMatrix a_pf_;
  succinct::RankSelectBits a_last_;
  succinct::RankSelectBits a_leaf_;
  succinct::RankSelectBits a_diff_;
  std::vector<Pos> f_;
  IdStore leaf_ids_;
  succinct::RankSelectBits has_residual_;
  IdStore residual_ids_;
  PositionStore array_positions_;

  // Derived on build and load.
  Symbol array_symbol_ = 0;
  succinct::RankSelectBits leaf_by_label_;  // A_leaf regrouped label-major
  std::vector<std::uint64_t> label_start_;  // nodes with a smaller label
  std::vector<std::uint64_t> blocks_before_;  // rank1(A_last, F(c) - 1)
  succinct::IntVector block_owner_;  // position owning each sibling block
};

/// Builds the index from a normalized merged tree (children sorted by symbol).
/// `mt` supplies ids and array positions through `tree.origin`. Throws EMPTY_TREE.
XbwIndex build_xbw(const NormalizedTree& tree, const MergedTree& mt, SymbolTable symbols);

}  // namespace jxbw

#endif  // JXBW_XBW_INDEX_HPP
