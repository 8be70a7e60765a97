#include <random>
#include <string>

#include "doctest.h"
#include "jxbw/corpus.hpp"
#include "jxbw/error.hpp"
#include "jxbw/merged_tree.hpp"
#include "jxbw/symbol_table.hpp"
#include "jxbw/synthetic.hpp"
#include "support/oracles.hpp"

using namespace jxbw;

namespace {

const char* kTwoPeople =
    R"({"person":{"name":"Alice","age":30},"hobbies":["reading","cycling"]})" "\n"
    R"({"person":{"name":"Bob","age":30},"hobbies":["reading"]})" "\n";

MergedTree merge_sequential(const Corpus& c) {
  MergedTree mt;
  for (const auto& t : c.trees) mt = merge_trees(std::move(mt), MergedTree::from_tree(t, c.labels));
  return mt;
}

// Merged trees keep at most one child per label under every node.
bool siblings_distinct(const MergedTree& mt) {
  for (const auto& n : mt.nodes()) {
    std::set<LabelId> seen;
    for (NodeId c : n.children) {
      if (!seen.insert(mt.node(c).label).second) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("two people merge into twelve nodes") {
  const Corpus c = read_jsonl(std::string_view(kTwoPeople));
  CHECK(c.total_nodes() == 21);
  const MergedTree mt = merge_all(c.trees, c.labels);
  CHECK(mt.size() == 12);
  const auto pm = oracle::path_map(mt, c.labels);
  const std::vector<Label> age = {Label::object(), Label::key("person"), Label::object(), Label::key("age"),
                                  Label::number("30")};
  CHECK(pm.at(age).ids == std::set<TreeId>{1, 2});
  const std::vector<Label> reading = {Label::object(), Label::key("hobbies"), Label::array(),
                                      Label::string("reading")};
  CHECK(pm.at(reading).ids == std::set<TreeId>{1, 2});
  CHECK(pm.at(reading).positions == std::set<std::pair<TreeId, std::uint32_t>>{{1, 0}, {2, 0}});
  auto cycling = reading;
  cycling.back() = Label::string("cycling");
  CHECK(pm.at(cycling).ids == std::set<TreeId>{1});
  CHECK(pm.at(cycling).positions == std::set<std::pair<TreeId, std::uint32_t>>{{1, 1}});

  const auto s = merge_stats(mt, c.trees);
  CHECK(s.trees == 2);
  CHECK(s.merged_nodes == 12);
  CHECK(s.total_nodes == 21);
  CHECK(s.leaves == 5);
  CHECK(s.ratio() == doctest::Approx(12.0 / 21.0));
  CHECK(mt.subtree_ids(MergedTree::root()) == IdSet{1, 2});
}

TEST_CASE("merged path map equals the union of line path maps") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    std::mt19937_64 rng(seed);
    const Corpus c = read_jsonl(oracle::random_corpus(rng, 1 + seed % 13, 4));
    const MergedTree mt = merge_all(c.trees, c.labels);
    CAPTURE(seed);
    REQUIRE(siblings_distinct(mt));
    const auto expected = oracle::path_map(c.trees, c.labels);
    REQUIRE(oracle::path_map(mt, c.labels) == expected);
    // One merged node per distinct path.
    REQUIRE(mt.size() == expected.size());
    REQUIRE(oracle::path_map(merge_sequential(c), c.labels) == expected);
  }
}

TEST_CASE("mixed and schema corpora") {
  for (const auto& lines : {synthetic::mixed_lines(400, 3), synthetic::schema_lines(400, 3)}) {
    const Corpus c = read_jsonl(synthetic::join_lines(lines));
    const MergedTree mt = merge_all(c.trees, c.labels);
    CHECK(siblings_distinct(mt));
    CHECK(oracle::path_map(mt, c.labels) == oracle::path_map(c.trees, c.labels));
    for (const auto& n : mt.nodes()) {
      REQUIRE(std::is_sorted(n.ids.begin(), n.ids.end()));
      REQUIRE(std::adjacent_find(n.ids.begin(), n.ids.end()) == n.ids.end());
      REQUIRE(std::is_sorted(n.positions.begin(), n.positions.end()));
    }
  }
}

TEST_CASE("disjoint lines share only the root") {
  const Corpus c = read_jsonl(synthetic::join_lines(synthetic::disjoint_lines(50, 1)));
  const MergedTree mt = merge_all(c.trees, c.labels);
  CHECK(mt.size() == c.total_nodes() - (c.trees.size() - 1));
}

TEST_CASE("empty containers keep their line at the inner node") {
  const Corpus c = read_jsonl(std::string_view("{\"a\":{}}\n{\"a\":{\"b\":1}}\n{\"a\":[]}\n"));
  const MergedTree mt = merge_all(c.trees, c.labels);
  const auto pm = oracle::path_map(mt, c.labels);
  CHECK(pm.at({Label::object(), Label::key("a"), Label::object()}).ids == std::set<TreeId>{1});
  CHECK(pm.at({Label::object(), Label::key("a"), Label::array()}).ids == std::set<TreeId>{3});
  CHECK(mt.subtree_ids(MergedTree::root()) == IdSet{1, 2, 3});
}

TEST_CASE("merge edge cases") {
  const Corpus c = read_jsonl(std::string_view("{\"a\":1}\n"));
  const MergedTree one = MergedTree::from_tree(c.trees[0], c.labels);
  CHECK(merge_trees(MergedTree{}, one).size() == one.size());
  CHECK(merge_trees(one, MergedTree{}).size() == one.size());
  CHECK(merge_trees(one, one).size() == one.size());
  CHECK_THROWS_AS(merge_all({}, c.labels), Error);
}

TEST_CASE("label-ordered symbols sort by kind then bytes") {
  const Corpus c = read_jsonl(std::string_view(kTwoPeople));
  const MergedTree mt = merge_all(c.trees, c.labels);
  const SymbolTable s = build_symbol_table(mt, c.labels);
  REQUIRE(s.sigma() == 11);
  for (Symbol a = 1; a < s.sigma(); ++a) CHECK(s.label(a) < s.label(a + 1));
  CHECK(s.label(1) == Label::object());
  CHECK(s.label(2) == Label::array());
  CHECK(s.find(Label::string("Carol")) == std::nullopt);
  CHECK_THROWS_AS(s.symbol(Label::string("Carol")), Error);
  CHECK_THROWS_AS(s.label(0), Error);
  CHECK_THROWS_AS(s.label(12), Error);
  CHECK(build_symbol_table(c.trees, c.labels).sigma() == 11);
}

TEST_CASE("normalization sorts children by symbol and keeps the shape") {
  std::mt19937_64 rng(77);
  const Corpus c = read_jsonl(oracle::random_corpus(rng, 30, 4));
  const MergedTree mt = merge_all(c.trees, c.labels);
  for (auto order : {SymbolOrder::label, SymbolOrder::first_occurrence}) {
    const SymbolTable s = build_symbol_table(mt, c.labels, order);
    const NormalizedTree nt = normalize(mt, c.labels, s);
    REQUIRE(nt.tree.size() == mt.size());
    std::vector<bool> hit(mt.size(), false);
    for (NodeId v = 0; v < nt.tree.size(); ++v) {
      const NodeId o = nt.origin[v];
      REQUIRE_FALSE(hit[o]);
      hit[o] = true;
      REQUIRE(s.label(nt.tree.label(v)) == c.labels[mt.node(o).label]);
      REQUIRE(nt.tree.degree(v) == mt.node(o).children.size());
      const auto kids = nt.tree.children(v);
      for (std::size_t k = 1; k < kids.size(); ++k) REQUIRE(nt.tree.label(kids[k - 1]) < nt.tree.label(kids[k]));
      if (v != 0) REQUIRE(nt.origin[nt.tree.parent(v)] != kNoNode);
    }
  }
}
