#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "jxbw/corpus.hpp"
#include "jxbw/error.hpp"
#include "jxbw/pipeline.hpp"
#include "jxbw/synthetic.hpp"
#include "jxbw/xbw_index.hpp"
#include "support/oracles.hpp"

using namespace jxbw;

namespace {

const char* kTwoPeople =
    R"({"person":{"name":"Alice","age":30},"hobbies":["reading","cycling"]})" "\n"
    R"({"person":{"name":"Bob","age":30},"hobbies":["reading"]})" "\n";

struct Built {
  Corpus corpus;
  MergedTree mt;
  SymbolTable symbols;
  NormalizedTree nt;
  XbwIndex x;
};

Built build(std::string_view text, SymbolOrder order = SymbolOrder::label) {
  Built b;
  b.corpus = read_jsonl(text);
  b.mt = merge_all(b.corpus.trees, b.corpus.labels);
  b.symbols = build_symbol_table(b.mt, b.corpus.labels, order);
  b.nt = normalize(b.mt, b.corpus.labels, b.symbols);
  b.x = build_xbw(b.nt, b.mt, b.symbols);
  return b;
}

Symbol letter(char c) { return static_cast<Symbol>(c - 'A' + 1); }

std::vector<Symbol> letters(std::string_view s) {
  std::vector<Symbol> out;
  for (char c : s) out.push_back(letter(c));
  return out;
}

// Every structural query on x agrees with the explicit layout.
void check_layout(const Built& b) {
  const XbwIndex& x = b.x;
  const oracle::Xbw o(b.nt.tree);
  REQUIRE(x.size() == o.size());
  std::vector<bool> last(o.size()), leaf(o.size());
  for (Pos i = 1; i <= x.size(); ++i) {
    CAPTURE(i);
    REQUIRE(x.label(i) == o.label(i));
    REQUIRE(x.parent_label(i) == o.parent_label(i));
    REQUIRE(x.is_leaf(i) == o.is_leaf(i));
    const auto kids = o.children(i);
    if (kids.empty()) {
      REQUIRE_FALSE(x.children(i).has_value());
    } else {
      const auto r = x.children(i);
      REQUIRE(r.has_value());
      REQUIRE(r->first == kids.front());
      REQUIRE(r->last == kids.back());
      REQUIRE(r->size() == kids.size());
      REQUIRE(x.degree(i) == kids.size());
      for (std::size_t k = 0; k < kids.size(); ++k) REQUIRE(x.ranked_child(i, k + 1) == kids[k]);
      for (Pos kid : kids) {
        last[kid - 1] = kid == kids.back();
        const Symbol c = o.label(kid);
        for (std::uint64_t k = 1; k <= kids.size() + 1; ++k) REQUIRE(x.char_ranked_child(i, c, k) == o.char_ranked_child(i, c, k));
      }
    }
    REQUIRE(x.parent(i) == o.parent(i));
    leaf[i - 1] = o.is_leaf(i);

    const auto& node = b.mt.node(b.nt.origin[o.node(i)]);
    const auto ids = x.node_ids(i);
    REQUIRE(IdSet(ids.begin(), ids.end()) == node.ids);
    if (o.is_leaf(i)) {
      const auto t = x.tree_ids(i);
      REQUIRE(IdSet(t.begin(), t.end()) == node.ids);
    } else {
      REQUIRE_THROWS_AS(x.tree_ids(i), Error);
    }
    const auto ap = x.array_positions(i);
    REQUIRE(std::vector<ArrayPosition>(ap.begin(), ap.end()) == node.positions);
    REQUIRE(x.subtree_ids(i) == b.mt.subtree_ids(b.nt.origin[o.node(i)]));
  }
  last[0] = true;
  for (Pos i = 1; i <= x.size(); ++i) REQUIRE(x.is_last(i) == last[i - 1]);

  // F table: first position whose parent carries each symbol.
  for (Symbol c = 1; c <= x.sigma(); ++c) {
    Pos first = x.size() + 1;
    for (Pos i = x.size(); i >= 1; --i) {
      if (o.parent_label(i) >= c) first = i;
    }
    REQUIRE(x.first_with_parent(c) == first);
  }

  // Label-level counts and internal ranks against a scan.
  for (Symbol c = 1; c <= x.sigma(); ++c) {
    std::uint64_t all = 0, internal = 0;
    for (Pos i = 1; i <= x.size(); ++i) {
      if (o.label(i) != c) continue;
      ++all;
      REQUIRE(x.select(c, all) == i);
      if (!o.is_leaf(i)) {
        ++internal;
        REQUIRE(x.select_internal(c, internal) == i);
      }
      REQUIRE(x.internal_rank(c, i) == internal);
    }
    REQUIRE(x.count(c) == all);
    REQUIRE(x.internal_count(c) == internal);
    REQUIRE_THROWS_AS(x.select(c, all + 1), Error);
    REQUIRE_THROWS_AS(x.select_internal(c, internal + 1), Error);
  }
}

void check_path(const Built& b, const oracle::Xbw& o, const std::vector<Symbol>& path) {
  CAPTURE(path.size());
  const auto got = b.x.subpath_search(path);
  REQUIRE(got == o.subpath(path));
  if (path.empty()) return;
  const auto ranks = b.x.subpath_ranks(path);
  const Symbol c = path.back();
  if (path.size() == 1) {
    REQUIRE(ranks.has_value() == (b.x.count(c) > 0));
    if (ranks) REQUIRE(*ranks == std::pair<std::uint64_t, std::uint64_t>{0, b.x.count(c)});
    return;
  }
  const auto reach = o.reachable(path);
  REQUIRE(ranks.has_value() == !reach.empty());
  if (!ranks) return;
  std::set<Pos> from_ranks;
  for (std::uint64_t k = ranks->first + 1; k <= ranks->second; ++k) from_ranks.insert(b.x.select(c, k));
  REQUIRE(from_ranks == reach);
  // The reached nodes are exactly the final-label nodes inside the range.
  for (Pos i = got->first; i <= got->last; ++i) {
    if (b.x.label(i) == c) REQUIRE(reach.count(i) == 1);
  }
}

}  // namespace

TEST_CASE("worked example: symbols in first-occurrence order") {
  const Built b = build(kTwoPeople, SymbolOrder::first_occurrence);
  const auto& s = b.symbols;
  REQUIRE(s.sigma() == 11);
  CHECK(s.label(letter('A')) == Label::object());
  CHECK(s.label(letter('B')) == Label::key("hobbies"));
  CHECK(s.label(letter('C')) == Label::array());
  CHECK(s.label(letter('F')) == Label::key("person"));
  CHECK(s.label(letter('G')) == Label::key("age"));
  CHECK(s.label(letter('H')) == Label::number("30"));
  CHECK(s.label(letter('I')) == Label::key("name"));
  CHECK(s.label(letter('J')) == Label::string("Alice"));
  CHECK(s.label(letter('K')) == Label::string("Bob"));
}

TEST_CASE("worked example: arrays") {
  const Built b = build(kTwoPeople, SymbolOrder::first_occurrence);
  const XbwIndex& x = b.x;
  REQUIRE(x.size() == 12);

  std::vector<Pos> last_ones;
  std::vector<int> diff;
  for (Pos i = 1; i <= 12; ++i) {
    if (x.is_last(i)) last_ones.push_back(i);
    diff.push_back(x.diff(i));
  }
  CHECK(last_ones == std::vector<Pos>{1, 3, 5, 6, 8, 9, 10, 12});
  CHECK(diff == std::vector<int>{1, 1, 0, 1, 0, 1, 1, 0, 1, 1, 1, 0});

  CHECK(x.label(1) == letter('A'));
  CHECK(x.label(9) == letter('A'));
  CHECK(x.label(5) == letter('I'));
  CHECK(x.label(10) == letter('H'));
  CHECK(x.label(12) == letter('K'));
  check_layout(b);
}

TEST_CASE("worked example: sibling blocks") {
  const Built b = build(kTwoPeople, SymbolOrder::first_occurrence);
  const XbwIndex& x = b.x;
  // Root object, inner object, "hobbies", array, "person", "age", "name".
  const std::vector<std::pair<Pos, PosRange>> blocks = {
      {1, {2, 3}}, {9, {4, 5}}, {2, {6, 6}}, {6, {7, 8}}, {3, {9, 9}}, {4, {10, 10}}, {5, {11, 12}},
  };
  for (const auto& [node, range] : blocks) {
    CAPTURE(node);
    REQUIRE(x.children(node).has_value());
    CHECK(*x.children(node) == range);
  }
}

TEST_CASE("worked example: navigation") {
  const Built b = build(kTwoPeople, SymbolOrder::first_occurrence);
  const XbwIndex& x = b.x;
  CHECK(x.parent(5) == Pos{9});
  CHECK(x.parent(12) == Pos{5});
  CHECK(x.parent(10) == Pos{4});
  CHECK(x.parent(4) == Pos{9});
  CHECK_FALSE(x.parent(1).has_value());
  CHECK(x.ranked_child(5, 2) == 12);
  CHECK(x.char_ranked_child(5, letter('K'), 1) == Pos{12});
  CHECK_FALSE(x.char_ranked_child(5, letter('K'), 2).has_value());
  CHECK_THROWS_AS(x.ranked_child(5, 3), Error);
  CHECK_THROWS_AS(x.parent(13), Error);
  CHECK_THROWS_AS(x.children(0), Error);
}

TEST_CASE("worked example: subpaths of the query") {
  const Built b = build(kTwoPeople, SymbolOrder::first_occurrence);
  CHECK(b.x.subpath_search(letters("AIK")) == PosRange{12, 12});
  CHECK(b.x.subpath_search(letters("AGH")) == PosRange{10, 10});
  CHECK(b.x.subpath_search(std::vector<Symbol>{}) == PosRange{1, 12});
  CHECK(b.x.subpath_search(letters("I")) == PosRange{11, 12});
  CHECK_FALSE(b.x.subpath_search(letters("AK")).has_value());
  const oracle::Xbw o(b.nt.tree);
  for (std::string_view p : {"AI", "AIJ", "AF", "AFA", "ABC", "BCD", "CD", "AIK", "AGH", "K", "Z"}) {
    CAPTURE(p);
    std::vector<Symbol> path = letters(p);
    if (p == "Z") path = {static_cast<Symbol>(b.x.sigma() + 1)};
    check_path(b, o, path);
  }
}

TEST_CASE("leaf ids") {
  const Built b = build(kTwoPeople, SymbolOrder::first_occurrence);
  const auto ids = b.x.tree_ids(10);
  CHECK(IdSet(ids.begin(), ids.end()) == IdSet{1, 2});
  CHECK(b.x.subtree_ids(1) == IdSet{1, 2});
  CHECK(b.x.leaf_count() == 5);
}

TEST_CASE("random corpora: layout, navigation and ids") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    std::mt19937_64 rng(seed);
    const std::string text = oracle::random_corpus(rng, 1 + seed * 3, 4);
    CAPTURE(seed);
    for (auto order : {SymbolOrder::label, SymbolOrder::first_occurrence}) {
      check_layout(build(text, order));
    }
  }
}

TEST_CASE("random corpora: subpaths") {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    std::mt19937_64 rng(seed);
    const Built b = build(oracle::random_corpus(rng, 20, 5));
    const oracle::Xbw o(b.nt.tree);
    const auto& t = b.nt.tree;
    CAPTURE(seed);
    // Paths read upward from random nodes always occur.
    for (int q = 0; q < 60; ++q) {
      NodeId v = static_cast<NodeId>(rng() % t.size());
      std::vector<Symbol> path;
      const std::size_t len = 1 + rng() % 4;
      for (; v != kNoNode && path.size() < len; v = t.parent(v)) path.insert(path.begin(), t.label(v));
      check_path(b, o, path);
    }
    // Random symbol strings mostly miss.
    for (int q = 0; q < 60; ++q) {
      std::vector<Symbol> path(1 + rng() % 3);
      for (auto& s : path) s = static_cast<Symbol>(1 + rng() % b.x.sigma());
      check_path(b, o, path);
    }
  }
}

TEST_CASE("schema corpus: layout") {
  const auto lines = synthetic::schema_lines(300, 9);
  check_layout(build(synthetic::join_lines(lines)));
}

TEST_CASE("single-line corpus") {
  const Built b = build("{\"a\":{}}\n");
  check_layout(b);
  const oracle::Xbw o(b.nt.tree);
  check_path(b, o, {1});
  check_path(b, o, {1, 2});
  check_path(b, o, {2, 1});
  check_path(b, o, {1, 2, 1});
}
