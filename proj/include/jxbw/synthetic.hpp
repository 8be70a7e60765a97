#ifndef JXBW_SYNTHETIC_HPP
#define JXBW_SYNTHETIC_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "jxbw/corpus.hpp"
#include "jxbw/json_tree.hpp"

namespace jxbw::synthetic {

/// Mixed objects, arrays and scalars. Siblings never share a label inside a
/// line: object keys are distinct and every array holds distinct scalars plus
/// at most one object and one array. Arrays appear in random element order.
std::vector<std::string> mixed_lines(std::size_t count, std::uint64_t seed);

/// Records following one schema of `keys` top-level keys (at least 20) with
/// values drawn from small per-key domains, a nested object and a tag array.
/// A single "id" key carries a value unique to the line.
std::vector<std::string> schema_lines(std::size_t count, std::uint64_t seed, std::size_t keys = 24);

/// Records whose keys and values never repeat across lines, so merging can
/// only share the root.
std::vector<std::string> disjoint_lines(std::size_t count, std::uint64_t seed);

std::string join_lines(const std::vector<std::string>& lines);

/// Draws queries that are guaranteed to occur in the corpus: a random node of
/// a random line, an object/array/scalar ancestor as query root, and a
/// connected subtree of depth 2 to 4 whose leaves are leaves of the line.
/// Array elements keep their source order.
class QuerySampler {
 public:
  QuerySampler(const Corpus& corpus, std::uint64_t seed, unsigned min_depth = 2, unsigned max_depth = 4);

  /// nullopt only when no line has a node of the required depth.
  std::optional<QueryTree> sample();
  /// A sampled query with one leaf or key renamed to a label absent from the
  /// corpus; it can never match.
  std::optional<QueryTree> sample_miss();

 private:
  std::optional<QueryTree> try_sample();

  const Corpus& corpus_;
  std::mt19937_64 rng_;
  unsigned min_depth_;
  unsigned max_depth_;
  std::uint64_t miss_counter_ = 0;
};

}  // namespace jxbw::synthetic

#endif  // JXBW_SYNTHETIC_HPP
