#include "jxbw/xbw_index.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>

#include "jxbw/binary_io.hpp"
#include "jxbw/error.hpp"

namespace jxbw {
namespace {

constexpr std::string_view kMagic = "JXBW";
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kFlagFirstOccurrence = 1u << 0;
constexpr std::uint32_t kFlagArrayPositions = 1u << 1;
// magic, version, flags, n, total file length
constexpr std::uint64_t kHeaderBytes = 4 + 4 + 4 + 8 + 8;

using succinct::BitBuffer;
using succinct::IntVector;
using succinct::RankSelectBits;
using succinct::WaveletMatrix;

void write_bits(BinaryWriter& w, const RankSelectBits& bits) {
  w.u64(bits.size());
  w.words(bits.words());
}

RankSelectBits read_bits(BinaryReader& r, std::uint64_t expected, std::string_view what) {
  const std::uint64_t len = r.u64();
  if (len != expected) {
    throw Error(ErrorCode::truncated, std::string(what) + " length " + std::to_string(len) + ", expected " +
                                          std::to_string(expected));
  }
  const std::uint64_t words = (len + 63) / 64;
  if (words > r.remaining() / 8) throw Error(ErrorCode::truncated, std::string(what) + " words exceed file");
  std::vector<std::uint64_t> data(words);
  for (auto& x : data) x = r.u64();
  return RankSelectBits(std::move(data), len);
}

void write_wavelet(BinaryWriter& w, const WaveletMatrix& wm) {
  w.u64(wm.max_symbol());
  w.u8(static_cast<std::uint8_t>(wm.levels()));
  for (unsigned l = 0; l < wm.levels(); ++l) {
    w.words(wm.level(l).words());
    w.u64(wm.level(l).zeros());
  }
}

WaveletMatrix read_wavelet(BinaryReader& r, std::uint64_t n, std::uint64_t sigma, std::string_view what) {
  const std::uint64_t max_symbol = r.u64();
  if (max_symbol != sigma) throw Error(ErrorCode::truncated, std::string(what) + " alphabet mismatch");
  const unsigned levels = r.u8();
  std::vector<RankSelectBits> rows;
  for (unsigned l = 0; l < levels; ++l) {
    const std::uint64_t words = (n + 63) / 64;
    if (words > r.remaining() / 8) throw Error(ErrorCode::truncated, std::string(what) + " level exceeds file");
    std::vector<std::uint64_t> data(words);
    for (auto& x : data) x = r.u64();
    rows.emplace_back(std::move(data), n);
    if (r.u64() != rows.back().zeros()) throw Error(ErrorCode::truncated, std::string(what) + " zero count mismatch");
  }
  return WaveletMatrix(n, static_cast<std::uint32_t>(max_symbol), std::move(rows));
}

}  // namespace

// ---------------------------------------------------------------- build

XbwIndex build_xbw(const NormalizedTree& nt, const MergedTree& mt, SymbolTable symbols) {
  const auto& t = nt.tree;
  if (t.empty()) throw Error(ErrorCode::empty_tree, "cannot index an empty tree");
  const std::size_t n = t.size();

  // Upward label sequence comparison; the root's sequence is empty.
  auto key_compare = [&](NodeId u, NodeId v) -> int {
    NodeId pu = t.parent(u), pv = t.parent(v);
    while (pu != pv) {
      if (pu == kNoNode) return -1;
      if (pv == kNoNode) return 1;
      if (t.label(pu) != t.label(pv)) return t.label(pu) < t.label(pv) ? -1 : 1;
      pu = t.parent(pu);
      pv = t.parent(pv);
    }
    return 0;
  };

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeId u, NodeId v) { return key_compare(u, v) < 0; });

  XbwIndex x;
  x.n_ = n;
  const Symbol array_sym = symbols.find(Label::array()).value_or(0);
  x.symbols_ = std::move(symbols);
  const std::size_t sigma = x.symbols_.sigma();

  std::vector<std::uint32_t> lab(n), pf(n);
  BitBuffer last, leaf, diff, residual;
  std::vector<std::uint64_t> per_parent(sigma + 2, 0);
  for (std::size_t p = 0; p < n; ++p) {
    const NodeId v = order[p];
    const NodeId par = t.parent(v);
    lab[p] = t.label(v);
    pf[p] = par == kNoNode ? 0 : t.label(par);
    ++per_parent[pf[p]];
    last.push_back(par == kNoNode || t.children(par).back() == v);
    leaf.push_back(t.is_leaf(v));
    diff.push_back(p == 0 || key_compare(order[p - 1], v) != 0);

    const auto& m = mt.node(nt.origin[v]);
    if (t.is_leaf(v)) {
      x.leaf_ids_.push_back(std::span<const TreeId>(m.ids));
      residual.push_back(false);
    } else {
      residual.push_back(!m.ids.empty());
      if (!m.ids.empty()) x.residual_ids_.push_back(std::span<const TreeId>(m.ids));
    }
    if (array_sym != 0 && pf[p] == array_sym) x.array_positions_.push_back(std::span<const ArrayPosition>(m.positions));
  }

  x.a_label_ = WaveletMatrix(lab, static_cast<std::uint32_t>(sigma));
  x.a_pf_ = WaveletMatrix(pf, static_cast<std::uint32_t>(sigma));
  x.a_last_ = RankSelectBits(std::move(last));
  x.a_leaf_ = RankSelectBits(std::move(leaf));
  x.a_diff_ = RankSelectBits(std::move(diff));
  x.has_residual_ = RankSelectBits(std::move(residual));
  x.f_.assign(sigma + 2, 0);
  x.f_[0] = 1;
  for (std::size_t c = 0; c + 1 < sigma + 2; ++c) x.f_[c + 1] = x.f_[c] + per_parent[c];
  x.derive();
  return x;
}

void XbwIndex::derive() {
  const std::size_t sigma = symbols_.sigma();
  array_symbol_ = symbols_.find(Label::array()).value_or(0);

  std::vector<Symbol> lab(n_);
  std::vector<std::uint64_t> counts(sigma + 1, 0);
  for (Pos i = 1; i <= n_; ++i) {
    lab[i - 1] = a_label_.access(i);
    ++counts[lab[i - 1]];
  }
  label_start_.assign(sigma + 2, 0);
  for (std::size_t c = 0; c <= sigma; ++c) label_start_[c + 1] = label_start_[c] + counts[c];
  BitBuffer grouped(n_);
  std::vector<std::uint64_t> cursor(label_start_.begin(), label_start_.end() - 1);
  for (Pos i = 1; i <= n_; ++i) {
    const std::uint64_t slot = cursor[lab[i - 1]]++;
    if (a_leaf_.access(i)) grouped.set(slot);
  }
  leaf_by_label_ = RankSelectBits(std::move(grouped));

  blocks_before_.assign(sigma + 2, 0);
  for (std::size_t c = 0; c < sigma + 2; ++c) blocks_before_[c] = a_last_.rank1(f_[c] - 1);

  // Every internal c-node owns exactly one block among those with parent c.
  if (blocks_before_[1] != 1) throw Error(ErrorCode::truncated, "root block is malformed");
  for (std::size_t c = 1; c <= sigma; ++c) {
    if (internal_count(static_cast<Symbol>(c)) != blocks_before_[c + 1] - blocks_before_[c]) {
      throw Error(ErrorCode::truncated, "sibling blocks do not match internal nodes of symbol " + std::to_string(c));
    }
  }
  // Slot 0 is the root's own block.
  block_owner_ = IntVector(a_last_.ones(), n_);
  std::vector<std::uint64_t> next(blocks_before_.begin(), blocks_before_.end());
  for (Pos i = 1; i <= n_; ++i) {
    if (!a_leaf_.access(i)) block_owner_.set(next[lab[i - 1]]++, i);
  }
}

// ---------------------------------------------------------------- navigation

void XbwIndex::check_pos(Pos i) const {
  if (i == 0 || i > n_) {
    throw Error(ErrorCode::out_of_range, "position " + std::to_string(i) + " not in [1, " + std::to_string(n_) + "]");
  }
}

Pos XbwIndex::first_with_parent(Symbol c) const {
  if (c >= f_.size()) throw Error(ErrorCode::out_of_range, "symbol " + std::to_string(c) + " beyond F table");
  return f_[c];
}

std::uint64_t XbwIndex::internal_rank(Symbol c, Pos i) const {
  if (c == 0 || c > sigma()) return 0;
  const std::uint64_t r = a_label_.rank(c, i);
  const std::uint64_t base = label_start_[c];
  return r - (leaf_by_label_.rank1_unchecked(base + r) - leaf_by_label_.rank1_unchecked(base));
}

std::uint64_t XbwIndex::count(Symbol c) const {
  if (c > sigma()) return 0;
  return label_start_[c + 1] - label_start_[c];
}

Pos XbwIndex::select(Symbol c, std::uint64_t k) const {
  if (k == 0 || k > count(c)) {
    throw Error(ErrorCode::not_enough_occurrences, "occurrence " + std::to_string(k) + " of symbol " +
                                                       std::to_string(c) + " (" + std::to_string(count(c)) + " exist)");
  }
  return a_label_.select_unchecked(c, k);
}

std::uint64_t XbwIndex::internal_count(Symbol c) const {
  if (c == 0 || c > sigma()) return 0;
  const std::uint64_t base = label_start_[c];
  const std::uint64_t end = label_start_[c + 1];
  return (end - base) - (leaf_by_label_.rank1_unchecked(end) - leaf_by_label_.rank1_unchecked(base));
}

Pos XbwIndex::select_internal(Symbol c, std::uint64_t k) const {
  const std::uint64_t total = internal_count(c);
  if (k == 0 || k > total) {
    throw Error(ErrorCode::not_enough_occurrences, "internal node " + std::to_string(k) + " of symbol " +
                                                       std::to_string(c) + " (" + std::to_string(total) + " exist)");
  }
  return block_owner_[blocks_before_[c] + k - 1];
}

std::optional<PosRange> XbwIndex::children(Pos i) const {
  check_pos(i);
  if (a_leaf_.access(i)) return std::nullopt;
  const Symbol c = a_label_.access(i);
  const std::uint64_t s = internal_rank(c, i);
  const std::uint64_t z = blocks_before_[c];
  const Pos l = (z + s - 1 == 0 ? 0 : a_last_.select1(z + s - 1)) + 1;
  const Pos r = a_last_.select1(z + s);
  return PosRange{l, r};
}

std::uint64_t XbwIndex::degree(Pos i) const {
  const auto range = children(i);
  return range ? range->size() : 0;
}

Pos XbwIndex::ranked_child(Pos i, std::uint64_t k) const {
  const auto range = children(i);
  if (!range || k == 0 || k > range->size()) {
    throw Error(ErrorCode::no_such_child, "position " + std::to_string(i) + " has no child " + std::to_string(k));
  }
  return range->first + k - 1;
}

std::optional<Pos> XbwIndex::char_ranked_child(Pos i, Symbol c, std::uint64_t k) const {
  const auto range = children(i);
  if (!range || k == 0 || c == 0 || c > sigma()) return std::nullopt;
  const std::uint64_t y = a_label_.rank(c, range->first - 1);
  if (y + k > count(c)) return std::nullopt;
  const Pos p = a_label_.select_unchecked(c, y + k);
  if (p > range->last) return std::nullopt;
  return p;
}

std::optional<Pos> XbwIndex::parent(Pos i) const {
  check_pos(i);
  if (i == 1) return std::nullopt;
  return block_owner_[a_last_.rank1_unchecked(i - 1)];
}

std::span<const TreeId> XbwIndex::tree_ids(Pos i) const {
  check_pos(i);
  if (!a_leaf_.access(i)) throw Error(ErrorCode::not_a_leaf, "position " + std::to_string(i) + " is internal");
  return leaf_ids_[a_leaf_.rank1(i) - 1];
}

std::span<const TreeId> XbwIndex::node_ids(Pos i) const {
  check_pos(i);
  if (a_leaf_.access(i)) return leaf_ids_[a_leaf_.rank1(i) - 1];
  if (has_residual_.access(i)) return residual_ids_[has_residual_.rank1(i) - 1];
  return {};
}

IdSet XbwIndex::subtree_ids(Pos i) const {
  check_pos(i);
  IdSet out;
  std::vector<Pos> stack{i};
  while (!stack.empty()) {
    const Pos p = stack.back();
    stack.pop_back();
    if (a_leaf_.access(p)) {
      const auto ids = leaf_ids_[a_leaf_.rank1(p) - 1];
      out.insert(out.end(), ids.begin(), ids.end());
      continue;
    }
    if (has_residual_.access(p)) {
      const auto ids = residual_ids_[has_residual_.rank1(p) - 1];
      out.insert(out.end(), ids.begin(), ids.end());
    }
    const auto range = children(p);
    for (Pos q = range->first; q <= range->last; ++q) stack.push_back(q);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::span<const ArrayPosition> XbwIndex::array_positions(Pos i) const {
  check_pos(i);
  if (array_symbol_ == 0 || a_pf_.access(i) != array_symbol_) return {};
  return array_positions_[i - f_[array_symbol_]];
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> XbwIndex::subpath_ranks(std::span<const Symbol> path) const {
  if (path.empty()) return std::nullopt;
  for (Symbol c : path) {
    if (c == 0 || c > sigma()) return std::nullopt;
  }
  if (path.size() == 1) {
    if (count(path[0]) == 0) return std::nullopt;
    return std::pair{std::uint64_t{0}, count(path[0])};
  }
  Pos first = f_[path[0]];
  Pos last = f_[path[0] + 1] - 1;
  if (first > last) return std::nullopt;
  for (std::size_t i = 1;; ++i) {
    const Symbol c = path[i];
    if (i + 1 == path.size()) {
      const std::uint64_t k1 = a_label_.rank(c, first - 1);
      const std::uint64_t k2 = a_label_.rank(c, last);
      if (k2 <= k1) return std::nullopt;
      return std::pair{k1, k2};
    }
    // Descend through the internal c-nodes of the range; leaves have no
    // children. The j-th internal c-node owns sibling block blocks_before(c) + j.
    const std::uint64_t k1 = internal_rank(c, first - 1);
    const std::uint64_t k2 = internal_rank(c, last);
    if (k2 <= k1) return std::nullopt;
    const std::uint64_t z = blocks_before_[c];
    first = (z + k1 == 0 ? 0 : a_last_.select1(z + k1)) + 1;
    last = a_last_.select1(z + k2);
  }
}

std::optional<PosRange> XbwIndex::subpath_search(std::span<const Symbol> path) const {
  if (path.empty()) return PosRange{1, n_};
  if (path.size() == 1) {
    if (path[0] == 0 || path[0] > sigma() || f_[path[0]] == f_[path[0] + 1]) return std::nullopt;
    return PosRange{f_[path[0]], f_[path[0] + 1] - 1};
  }
  const auto ranks = subpath_ranks(path);
  if (!ranks) return std::nullopt;
  const Symbol c = path.back();
  return PosRange{a_label_.select_unchecked(c, ranks->first + 1), a_label_.select_unchecked(c, ranks->second)};
}

// ---------------------------------------------------------------- persistence

std::string XbwIndex::serialize() const { return serialize(nullptr); }

SectionSizes XbwIndex::section_sizes() const {
  SectionSizes s;
  serialize(&s);
  return s;
}

std::string XbwIndex::serialize(SectionSizes* sizes) const {
  BinaryWriter w;
  std::size_t mark = 0;
  auto section = [&](std::uint64_t SectionSizes::*field) {
    if (sizes) sizes->*field = w.size() - mark;
    mark = w.size();
  };

  std::uint32_t flags = kFlagArrayPositions;
  if (symbols_.order() == SymbolOrder::first_occurrence) flags |= kFlagFirstOccurrence;
  w.bytes(kMagic);
  w.u32(kVersion);
  w.u32(flags);
  w.u64(n_);
  w.u64(0);  // total length, patched below
  section(&SectionSizes::header);

  w.u64(symbols_.sigma());
  for (Symbol s = 1; s <= symbols_.sigma(); ++s) {
    const Label& l = symbols_.label(s);
    w.u8(static_cast<std::uint8_t>(l.kind));
    w.u32(static_cast<std::uint32_t>(l.text.size()));
    w.bytes(l.text);
  }
  section(&SectionSizes::symbols);
  write_bits(w, a_last_);
  section(&SectionSizes::a_last);
  write_bits(w, a_leaf_);
  section(&SectionSizes::a_leaf);
  write_bits(w, a_diff_);
  section(&SectionSizes::a_diff);
  write_wavelet(w, a_label_);
  section(&SectionSizes::a_label);
  write_wavelet(w, a_pf_);
  section(&SectionSizes::a_pf);
  w.words(f_);
  section(&SectionSizes::f_table);
  leaf_ids_.write(w);
  section(&SectionSizes::ids);
  write_bits(w, has_residual_);
  residual_ids_.write(w);
  section(&SectionSizes::residual_ids);
  array_positions_.write(w);
  section(&SectionSizes::array_positions);

  std::string bytes = std::move(w).take();
  const std::uint64_t total = bytes.size() + 8;
  for (int b = 0; b < 8; ++b) bytes[20 + b] = static_cast<char>((total >> (8 * b)) & 0xFF);
  const std::uint64_t sum = fnv1a64(bytes);
  for (int b = 0; b < 8; ++b) bytes.push_back(static_cast<char>((sum >> (8 * b)) & 0xFF));
  if (sizes) sizes->checksum = 8;
  return bytes;
}

XbwIndex XbwIndex::deserialize(std::string_view bytes) {
  if (bytes.size() < kMagic.size() || bytes.substr(0, kMagic.size()) != kMagic) {
    throw Error(ErrorCode::bad_magic, "not a jxbw index file");
  }
  BinaryReader r(bytes);
  r.bytes(kMagic.size());
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw Error(ErrorCode::version_mismatch,
                "file version " + std::to_string(version) + ", supported " + std::to_string(kVersion));
  }
  const std::uint32_t flags = r.u32();
  const std::uint64_t n = r.u64();
  const std::uint64_t total = r.u64();
  if (bytes.size() < total) {
    throw Error(ErrorCode::truncated,
                "file has " + std::to_string(bytes.size()) + " bytes, header declares " + std::to_string(total));
  }
  if (bytes.size() > total || total < kHeaderBytes + 8) {
    throw Error(ErrorCode::truncated, "file length does not match header");
  }
  std::uint64_t stored = 0;
  for (int b = 0; b < 8; ++b) stored |= std::uint64_t(static_cast<unsigned char>(bytes[total - 8 + b])) << (8 * b);
  if (fnv1a64(bytes.substr(0, total - 8)) != stored) throw Error(ErrorCode::checksum_fail, "checksum mismatch");
  if (n == 0) throw Error(ErrorCode::truncated, "index has no nodes");

  XbwIndex x;
  x.n_ = n;
  const std::uint64_t sigma = r.count(5, "symbol table");
  std::vector<Label> labels;
  labels.reserve(sigma);
  for (std::uint64_t s = 0; s < sigma; ++s) {
    const std::uint8_t kind = r.u8();
    if (kind > static_cast<std::uint8_t>(LabelKind::null_literal)) {
      throw Error(ErrorCode::truncated, "bad label kind " + std::to_string(kind));
    }
    const std::uint32_t len = r.u32();
    labels.push_back(Label{static_cast<LabelKind>(kind), std::string(r.bytes(len))});
  }
  x.symbols_ = SymbolTable::from_ordered(
      labels, (flags & kFlagFirstOccurrence) ? SymbolOrder::first_occurrence : SymbolOrder::label);
  if (x.symbols_.sigma() != sigma) throw Error(ErrorCode::truncated, "duplicate labels in symbol table");

  x.a_last_ = read_bits(r, n, "A_last");
  x.a_leaf_ = read_bits(r, n, "A_leaf");
  x.a_diff_ = read_bits(r, n, "A_diff");
  x.a_label_ = read_wavelet(r, n, sigma, "A_label");
  x.a_pf_ = read_wavelet(r, n, sigma, "A_pf");
  x.f_.resize(sigma + 2);
  if (x.f_.size() > r.remaining() / 8) throw Error(ErrorCode::truncated, "F table exceeds file");
  for (auto& v : x.f_) v = r.u64();
  if (x.f_.front() != 1 || x.f_.back() != n + 1 || !std::is_sorted(x.f_.begin(), x.f_.end())) {
    throw Error(ErrorCode::truncated, "F table is inconsistent");
  }
  const std::uint64_t leaves = x.a_leaf_.ones();
  if (x.a_last_.ones() != n - leaves + 1 || !x.a_last_.access(n)) {
    throw Error(ErrorCode::truncated, "A_last does not match the leaf count");
  }
  x.leaf_ids_ = IdStore::read(r, leaves, "id directory");
  x.has_residual_ = read_bits(r, n, "residual flags");
  x.residual_ids_ = IdStore::read(r, x.has_residual_.ones(), "residual ids");
  const Symbol array_sym = x.symbols_.find(Label::array()).value_or(0);
  const std::uint64_t array_children = array_sym == 0 ? 0 : x.f_[array_sym + 1] - x.f_[array_sym];
  if (flags & kFlagArrayPositions) x.array_positions_ = PositionStore::read(r, array_children, "array positions");
  if (r.remaining() != 8) throw Error(ErrorCode::truncated, "unexpected bytes before checksum");
  x.derive();
  return x;
}

void XbwIndex::save(const std::filesystem::path& path) const {
  const std::string bytes = serialize();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::io, "write failed for " + path.string());
}

XbwIndex XbwIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace jxbw
