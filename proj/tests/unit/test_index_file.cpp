#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "doctest.h"
#include "jxbw/corpus.hpp"
#include "jxbw/error.hpp"
#include "jxbw/pipeline.hpp"
#include "jxbw/substructure_engine.hpp"
#include "jxbw/synthetic.hpp"
#include "support/oracles.hpp"

using namespace jxbw;

namespace {

XbwIndex sample_index(SymbolOrder order = SymbolOrder::label) {
  const auto lines = synthetic::mixed_lines(200, 4);
  return build_index(read_jsonl(synthetic::join_lines(lines)), order);
}

ErrorCode code_of(std::string_view bytes) {
  try {
    XbwIndex::deserialize(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("corrupt index was accepted");
  return ErrorCode::io;
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

void reseal(std::string& bytes) {
  const std::uint64_t sum = fnv1a64(std::string_view(bytes).substr(0, bytes.size() - 8));
  for (int b = 0; b < 8; ++b) bytes[bytes.size() - 8 + b] = static_cast<char>((sum >> (8 * b)) & 0xFF);
}

}  // namespace

TEST_CASE("round trip preserves every array and id set") {
  for (auto order : {SymbolOrder::label, SymbolOrder::first_occurrence}) {
    const XbwIndex x = sample_index(order);
    const std::string bytes = x.serialize();
    const XbwIndex y = XbwIndex::deserialize(bytes);
    CHECK(y.serialize() == bytes);
    REQUIRE(y.size() == x.size());
    CHECK(y.symbols().order() == order);
    for (Pos i = 1; i <= x.size(); ++i) {
      REQUIRE(y.label(i) == x.label(i));
      REQUIRE(y.parent(i) == x.parent(i));
      REQUIRE(y.children(i) == x.children(i));
      const auto a = x.node_ids(i), b = y.node_ids(i);
      REQUIRE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
      const auto p = x.array_positions(i), q = y.array_positions(i);
      REQUIRE(std::equal(p.begin(), p.end(), q.begin(), q.end()));
    }
  }
}

TEST_CASE("file round trip and search equivalence") {
  const auto lines = synthetic::mixed_lines(150, 8);
  const Corpus c = read_jsonl(synthetic::join_lines(lines));
  const XbwIndex x = build_index(c);
  const auto path = std::filesystem::temp_directory_path() / "jxbw_test_index_file.idx";
  x.save(path);
  const XbwIndex y = XbwIndex::load(path);
  std::filesystem::remove(path);
  const SubstructureEngine ex(x), ey(y);
  synthetic::QuerySampler sampler(c, 21);
  for (int i = 0; i < 100; ++i) {
    const auto q = sampler.sample();
    REQUIRE(q.has_value());
    REQUIRE(ey.search(*q) == ex.search(*q));
  }
}

TEST_CASE("section sizes add up to the file") {
  const XbwIndex x = sample_index();
  const auto s = x.section_sizes();
  CHECK(s.total() == x.serialize().size());
  CHECK(s.header == 28);
  CHECK(s.checksum == 8);
}

TEST_CASE("corruption is detected") {
  const std::string good = sample_index().serialize();

  SUBCASE("bad magic") {
    std::string b = good;
    b[0] = 'X';
    CHECK(code_of(b) == ErrorCode::bad_magic);
    CHECK(code_of("") == ErrorCode::bad_magic);
  }
  SUBCASE("version") {
    std::string b = good;
    b[4] = 9;
    CHECK(code_of(b) == ErrorCode::version_mismatch);
  }
  SUBCASE("truncation") {
    for (std::size_t keep : {std::size_t{6}, std::size_t{27}, good.size() / 2, good.size() - 1}) {
      CAPTURE(keep);
      CHECK(code_of(good.substr(0, keep)) == ErrorCode::truncated);
    }
    CHECK(code_of(good + "x") == ErrorCode::truncated);
  }
  SUBCASE("flipped payload bits fail the checksum") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 200; ++t) {
      std::string b = good;
      const std::size_t at = 28 + rng() % (b.size() - 36);
      b[at] = static_cast<char>(b[at] ^ (1u << (rng() % 8)));
      REQUIRE(code_of(b) == ErrorCode::checksum_fail);
    }
  }
}

TEST_CASE("resealed garbage never crashes the loader") {
  // A valid checksum over a damaged payload must still be rejected or yield
  // an index whose arrays are self-consistent enough to be walked.
  const std::string good = sample_index().serialize();
  std::mt19937_64 rng(17);
  int rejected = 0;
  for (int t = 0; t < 400; ++t) {
    std::string b = good;
    const int flips = 1 + static_cast<int>(rng() % 3);
    for (int f = 0; f < flips; ++f) {
      const std::size_t at = 28 + rng() % (b.size() - 36);
      b[at] = static_cast<char>(rng());
    }
    reseal(b);
    try {
      const XbwIndex y = XbwIndex::deserialize(b);
      for (Pos i = 1; i <= y.size(); ++i) {
        (void)y.children(i);
        (void)y.parent(i);
      }
    } catch (const Error&) {
      ++rejected;
    }
  }
  CHECK(rejected > 0);
}

TEST_CASE("missing file") {
  try {
    XbwIndex::load("/nonexistent/dir/x.idx");
    FAIL("loaded a missing file");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }
}
