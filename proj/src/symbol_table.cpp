#include "jxbw/symbol_table.hpp"

#include <algorithm>
#include <string>

#include "jxbw/error.hpp"

namespace jxbw {

SymbolTable SymbolTable::from_labels(std::vector<Label> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return from_ordered(labels, SymbolOrder::label);
}

SymbolTable SymbolTable::from_ordered(std::span<const Label> labels, SymbolOrder order) {
  SymbolTable t;
  t.order_ = order;
  for (const auto& l : labels) t.pool_.intern(l);
  return t;
}

const Label& SymbolTable::label(Symbol s) const {
  if (s == 0 || s > sigma()) {
    throw Error(ErrorCode::out_of_range,
                "symbol " + std::to_string(s) + " not in [1, " + std::to_string(sigma()) + "]");
  }
  return pool_[s - 1];
}

std::optional<Symbol> SymbolTable::find(const Label& label) const {
  if (auto id = pool_.find(label)) return *id + 1;
  return std::nullopt;
}

Symbol SymbolTable::symbol(const Label& label) const {
  if (auto s = find(label)) return *s;
  throw Error(ErrorCode::unknown_label, "label " + to_display(label) + " is not in the symbol table");
}

std::vector<Symbol> SymbolTable::map_pool(const LabelPool& pool) const {
  std::vector<Symbol> out(pool.size(), 0);
  for (LabelId id = 0; id < pool.size(); ++id) out[id] = find(pool[id]).value_or(0);
  return out;
}

SymbolTable build_symbol_table(std::span<const JsonTree> trees, const LabelPool& pool) {
  std::vector<bool> seen(pool.size(), false);
  for (const auto& t : trees) {
    for (LabelId id : t.labels()) seen[id] = true;
  }
  std::vector<Label> labels;
  for (LabelId id = 0; id < pool.size(); ++id) {
    if (seen[id]) labels.push_back(pool[id]);
  }
  return SymbolTable::from_labels(std::move(labels));
}

SymbolTable build_symbol_table(const MergedTree& mt, const LabelPool& pool, SymbolOrder order) {
  if (order == SymbolOrder::label) {
    std::vector<bool> seen(pool.size(), false);
    for (const auto& n : mt.nodes()) seen[n.label] = true;
    std::vector<Label> labels;
    for (LabelId id = 0; id < pool.size(); ++id) {
      if (seen[id]) labels.push_back(pool[id]);
    }
    return SymbolTable::from_labels(std::move(labels));
  }

  std::vector<Label> ordered;
  std::vector<bool> seen(pool.size(), false);
  if (mt.empty()) return SymbolTable::from_ordered(ordered, order);
  std::vector<NodeId> stack{MergedTree::root()};
  std::vector<NodeId> kids;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    const auto& n = mt.node(v);
    if (!seen[n.label]) {
      seen[n.label] = true;
      ordered.push_back(pool[n.label]);
    }
    kids.assign(n.children.begin(), n.children.end());
    if (pool[n.label].kind != LabelKind::array) {
      std::stable_sort(kids.begin(), kids.end(),
                       [&](NodeId a, NodeId b) { return pool[mt.node(a).label] < pool[mt.node(b).label]; });
    }
    stack.insert(stack.end(), kids.rbegin(), kids.rend());
  }
  return SymbolTable::from_ordered(ordered, order);
}

NormalizedTree normalize(const MergedTree& mt, const LabelPool& pool, const SymbolTable& table) {
  NormalizedTree out;
  if (mt.empty()) return out;
  const std::vector<Symbol> sym = table.map_pool(pool);
  for (const auto& n : mt.nodes()) {
    if (sym[n.label] == 0) {
      throw Error(ErrorCode::unknown_label, "label " + to_display(pool[n.label]) + " is not in the symbol table");
    }
  }

  FlatTree<Symbol>::Builder builder;
  out.origin.reserve(mt.size());
  // Explicit stack: (node, next child index into its sorted child list).
  struct Frame {
    std::vector<NodeId> kids;
    std::size_t next = 0;
  };
  std::vector<Frame> stack;
  auto enter = [&](NodeId v) {
    builder.open(sym[mt.node(v).label]);
    out.origin.push_back(v);
    Frame f;
    const auto& c = mt.node(v).children;
    f.kids.assign(c.begin(), c.end());
    std::stable_sort(f.kids.begin(), f.kids.end(),
                     [&](NodeId a, NodeId b) { return sym[mt.node(a).label] < sym[mt.node(b).label]; });
    stack.push_back(std::move(f));
  };
  enter(MergedTree::root());
  while (!stack.empty()) {
    auto& top = stack.back();
    if (top.next == top.kids.size()) {
      builder.close();
      stack.pop_back();
      continue;
    }
    enter(top.kids[top.next++]);
  }
  out.tree = std::move(builder).finish();
  return out;
}

NormalizedTree normalize(const JsonTree& tree, const LabelPool& pool, const SymbolTable& table) {
  return normalize(MergedTree::from_tree(tree, pool), pool, table);
}

}  // namespace jxbw
