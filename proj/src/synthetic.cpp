#include "jxbw/synthetic.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace jxbw::synthetic {
namespace {

using Json = nlohmann::ordered_json;
using Rng = std::mt19937_64;

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

constexpr const char* kKeys[] = {"id",     "name",   "type",   "tags",  "items", "meta",  "value", "score",
                                 "active", "owner",  "city",   "color", "size",  "level", "kind",  "notes",
                                 "parent", "status", "weight", "count", "code",  "group", "rank",  "flag"};
constexpr const char* kWords[] = {"alpha", "beta",  "gamma", "delta", "red",   "green", "blue",  "tokyo",
                                  "paris", "oslo",  "lima",  "apple", "pear",  "plum",  "kiwi",  "fig",
                                  "north", "south", "east",  "west",  "small", "large", "huge",  "tiny"};

// Scalar drawn from a small domain; `tag` identifies its label for de-duplication.
Json random_scalar(Rng& rng, std::string& tag) {
  switch (uniform(rng, 0, 9)) {
    case 0:
    case 1:
    case 2:
    case 3: {
      std::string w = kWords[uniform(rng, 0, std::size(kWords) - 1)];
      tag = "s:" + w;
      return w;
    }
    case 4:
    case 5:
    case 6: {
      const auto n = static_cast<long long>(uniform(rng, 0, 40));
      tag = "n:" + std::to_string(n);
      return n;
    }
    case 7: {
      const double d = double(uniform(rng, 0, 20)) + 0.5;
      tag = "n:" + canonical_number(d);
      return d;
    }
    case 8: {
      const bool b = chance(rng, 0.5);
      tag = b ? "t" : "f";
      return b;
    }
    default:
      tag = "null";
      return nullptr;
  }
}

Json random_value(Rng& rng, unsigned depth);

Json random_object(Rng& rng, unsigned depth) {
  Json obj = Json::object();
  if (chance(rng, 0.05)) return obj;
  const std::size_t n = uniform(rng, 1, depth == 0 ? 6 : 4);
  std::set<std::size_t> used;
  while (used.size() < n) used.insert(uniform(rng, 0, std::size(kKeys) - 1));
  std::vector<std::size_t> order(used.begin(), used.end());
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t k : order) obj[kKeys[k]] = random_value(rng, depth + 1);
  return obj;
}

Json random_array(Rng& rng, unsigned depth) {
  Json arr = Json::array();
  if (chance(rng, 0.05)) return arr;
  const std::size_t n = uniform(rng, 1, 5);
  std::set<std::string> seen;
  bool has_object = false, has_array = false;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t pick = uniform(rng, 0, 9);
    if (pick == 0 && depth < 4 && !has_object) {
      has_object = true;
      arr.push_back(random_object(rng, depth + 1));
    } else if (pick == 1 && depth < 4 && !has_array) {
      has_array = true;
      arr.push_back(random_array(rng, depth + 1));
    } else {
      std::string tag;
      Json s = random_scalar(rng, tag);
      if (seen.insert(tag).second) arr.push_back(std::move(s));
    }
  }
  return arr;
}

Json random_value(Rng& rng, unsigned depth) {
  const std::size_t pick = uniform(rng, 0, 9);
  if (depth < 4 && pick < 2) return random_object(rng, depth);
  if (depth < 4 && pick < 4) return random_array(rng, depth);
  std::string tag;
  return random_scalar(rng, tag);
}

}  // namespace

std::vector<std::string> mixed_lines(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Json obj = random_object(rng, 0);
    if (obj.empty()) obj["id"] = static_cast<long long>(i + 1);
    out.push_back(obj.dump());
  }
  return out;
}

std::vector<std::string> schema_lines(std::size_t count, std::uint64_t seed, std::size_t keys) {
  Rng rng(seed);
  keys = std::max<std::size_t>(keys, 20);
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Json obj = Json::object();
    obj["id"] = static_cast<long long>(i + 1);
    for (std::size_t k = 1; k < keys; ++k) {
      const std::string key = "field" + std::to_string(k);
      switch (k % 4) {
        case 0: obj[key] = kWords[uniform(rng, 0, 7 + k % 16)]; break;
        case 1: obj[key] = static_cast<long long>(uniform(rng, 0, 20 + 10 * (k % 5))); break;
        case 2: obj[key] = chance(rng, 0.5); break;
        default: obj[key] = std::string("v") + std::to_string(uniform(rng, 0, 50)); break;
      }
    }
    Json meta = Json::object();
    meta["city"] = kWords[uniform(rng, 7, 10)];
    meta["level"] = static_cast<long long>(uniform(rng, 1, 5));
    meta["owner"] = kWords[uniform(rng, 11, 15)];
    obj["meta"] = std::move(meta);
    Json tags = Json::array();
    std::vector<std::size_t> pool(8);
    for (std::size_t t = 0; t < pool.size(); ++t) pool[t] = 16 + t;
    std::shuffle(pool.begin(), pool.end(), rng);
    const std::size_t n = uniform(rng, 1, 4);
    for (std::size_t t = 0; t < n; ++t) tags.push_back(kWords[pool[t]]);
    obj["tags"] = std::move(tags);
    out.push_back(obj.dump());
  }
  return out;
}

std::vector<std::string> disjoint_lines(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Json obj = Json::object();
    const std::string tag = std::to_string(i + 1);
    const std::size_t n = uniform(rng, 1, 4);
    for (std::size_t k = 0; k < n; ++k) {
      const std::string key = "k" + tag + "_" + std::to_string(k);
      if (chance(rng, 0.3)) {
        Json inner = Json::object();
        inner["k" + tag + "_" + std::to_string(k) + "_in"] = "v" + tag + "_" + std::to_string(k) + "_in";
        obj[key] = std::move(inner);
      } else {
        obj[key] = "v" + tag + "_" + std::to_string(k);
      }
    }
    out.push_back(obj.dump());
  }
  return out;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------- sampler

QuerySampler::QuerySampler(const Corpus& corpus, std::uint64_t seed, unsigned min_depth, unsigned max_depth)
    : corpus_(corpus), rng_(seed), min_depth_(std::max(2u, min_depth)), max_depth_(std::max(min_depth_, max_depth)) {}

std::optional<QueryTree> QuerySampler::sample() {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    if (auto q = try_sample()) return q;
  }
  return std::nullopt;
}

std::optional<QueryTree> QuerySampler::try_sample() {
  if (corpus_.trees.empty()) return std::nullopt;
  const JsonTree& t = corpus_.trees[uniform(rng_, 0, corpus_.trees.size() - 1)];
  const LabelPool& pool = corpus_.labels;
  const auto kind = [&](NodeId v) { return pool[t.label(v)].kind; };

  // Distance from each node to its nearest leaf (preorder: children follow parents).
  std::vector<unsigned> to_leaf(t.size(), 0);
  for (NodeId v = static_cast<NodeId>(t.size()); v-- > 0;) {
    if (t.is_leaf(v)) continue;
    unsigned best = ~0u;
    for (NodeId c : t.children(v)) best = std::min(best, to_leaf[c] + 1);
    to_leaf[v] = best;
  }

  const NodeId target = static_cast<NodeId>(uniform(rng_, 0, t.size() - 1));
  const unsigned depth = static_cast<unsigned>(uniform(rng_, min_depth_, max_depth_));

  // Query roots: non-key, non-leaf ancestors (or the node itself) from which
  // target and a leaf below it fit within `depth` nodes.
  std::vector<NodeId> roots;
  unsigned dist = 0;
  for (NodeId r = target; r != kNoNode; r = t.parent(r), ++dist) {
    if (dist + to_leaf[target] + 1 > depth) break;
    if (kind(r) != LabelKind::key && !t.is_leaf(r)) roots.push_back(r);
  }
  if (roots.empty()) return std::nullopt;
  const NodeId root = roots[uniform(rng_, 0, roots.size() - 1)];

  // Nodes on the root..target path are forced.
  std::vector<bool> forced(t.size(), false);
  for (NodeId v = target;; v = t.parent(v)) {
    forced[v] = true;
    if (v == root) break;
  }

  QueryTree::Builder builder;
  unsigned reached = 0;
  // budget: nodes still allowed on a path, including v.
  auto grow = [&](auto&& self, NodeId v, unsigned budget, unsigned level) -> void {
    builder.open(pool[t.label(v)]);
    reached = std::max(reached, level);
    if (!t.is_leaf(v)) {
      std::vector<NodeId> chosen;
      std::vector<NodeId> allowed;
      for (NodeId c : t.children(v)) {
        if (to_leaf[c] + 1 > budget - 1) continue;
        allowed.push_back(c);
        if (forced[c] || (kind(v) == LabelKind::key) || chance(rng_, 0.35)) chosen.push_back(c);
      }
      if (chosen.empty()) chosen.push_back(allowed[uniform(rng_, 0, allowed.size() - 1)]);
      // Keep source order (matters for arrays).
      std::sort(chosen.begin(), chosen.end());
      chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
      for (NodeId c : chosen) self(self, c, budget - 1, level + 1);
    }
    builder.close();
  };
  if (to_leaf[target] + 1 > depth) return std::nullopt;
  grow(grow, root, depth, 1);
  if (reached < min_depth_) return std::nullopt;
  return std::move(builder).finish();
}

std::optional<QueryTree> QuerySampler::sample_miss() {
  auto q = sample();
  if (!q) return std::nullopt;
  std::vector<NodeId> spots;
  for (NodeId v = 0; v < q->size(); ++v) {
    const auto k = q->label(v).kind;
    if ((q->is_leaf(v) && v != QueryTree::root()) || k == LabelKind::key) spots.push_back(v);
  }
  const NodeId victim = spots[uniform(rng_, 0, spots.size() - 1)];
  // Rebuild with the victim relabeled to something the corpus cannot contain.
  std::string fresh;
  do {
    fresh = "~absent~" + std::to_string(++miss_counter_);
  } while (corpus_.labels.find(Label::key(fresh)) || corpus_.labels.find(Label::string(fresh)));
  QueryTree::Builder builder;
  auto copy = [&](auto&& self, NodeId v) -> void {
    Label l = q->label(v);
    if (v == victim) l = l.kind == LabelKind::key ? Label::key(fresh) : Label::string(fresh);
    builder.open(std::move(l));
    for (NodeId c : q->children(v)) self(self, c);
    builder.close();
  };
  copy(copy, QueryTree::root());
  return std::move(builder).finish();
}

}  // namespace jxbw::synthetic
