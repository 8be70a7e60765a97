#include <random>
#include <vector>

#include "doctest.h"
#include "jxbw/error.hpp"
#include "jxbw/succinct/int_vector.hpp"
#include "jxbw/succinct/rank_select.hpp"
#include "jxbw/succinct/wavelet_matrix.hpp"
#include "support/oracles.hpp"

using namespace jxbw;
using jxbw::succinct::IntVector;
using jxbw::succinct::RankSelectBits;
using jxbw::succinct::WaveletMatrix;

namespace {

std::vector<bool> random_bits(std::mt19937_64& rng, std::size_t n, double density) {
  std::bernoulli_distribution d(density);
  std::vector<bool> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = d(rng);
  return b;
}

void check_against_scan(const std::vector<bool>& b) {
  const auto rs = RankSelectBits::from_bools(b);
  REQUIRE(rs.size() == b.size());
  const auto ones = oracle::rank1(b, b.size());
  CHECK(rs.ones() == ones);
  for (std::size_t i = 1; i <= b.size(); ++i) REQUIRE(rs.access(i) == b[i - 1]);
  std::uint64_t prefix = 0;
  for (std::size_t i = 0; i <= b.size(); ++i) {
    REQUIRE(rs.rank1(i) == prefix);
    if (i < b.size()) prefix += b[i];
  }
  for (std::size_t i = 0; i <= b.size(); i += 1 + b.size() / 16) REQUIRE(rs.rank1(i) == oracle::rank1(b, i));
  std::uint64_t k1 = 0, k0 = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i]) {
      REQUIRE(rs.select1(++k1) == i + 1);
    } else {
      REQUIRE(rs.select0(++k0) == i + 1);
    }
  }
}

}  // namespace

TEST_CASE("rank/select agree with a linear scan") {
  std::mt19937_64 rng(7);
  for (std::size_t n : {0u, 1u, 63u, 64u, 65u, 511u, 512u, 513u, 4097u, 20000u}) {
    for (double density : {0.0, 0.01, 0.5, 0.99, 1.0}) {
      CAPTURE(n);
      CAPTURE(density);
      check_against_scan(random_bits(rng, n, density));
    }
  }
}

TEST_CASE("sparse vector crosses many select samples") {
  std::vector<bool> b(200000, false);
  for (std::size_t i = 0; i < b.size(); i += 7) b[i] = true;
  check_against_scan(b);
}

TEST_CASE("rank/select bounds") {
  const auto rs = RankSelectBits::from_bools(std::vector<bool>{true, false, true});
  CHECK_THROWS_AS(rs.access(0), Error);
  CHECK_THROWS_AS(rs.access(4), Error);
  CHECK_THROWS_AS(rs.rank1(4), Error);
  CHECK_THROWS_AS(rs.select1(3), Error);
  CHECK_THROWS_AS(rs.select0(2), Error);
  CHECK_THROWS_AS(rs.select1(0), Error);
}

TEST_CASE("int vector round-trips packed values") {
  std::mt19937_64 rng(3);
  for (std::uint64_t max : {1ull, 2ull, 255ull, 1000ull, (1ull << 40) + 3}) {
    IntVector v(777, max);
    std::vector<std::uint64_t> ref(777);
    for (std::size_t i = 0; i < ref.size(); ++i) {
      ref[i] = rng() % (max + 1);
      v.set(i, ref[i]);
    }
    // Overwrite a few to make sure neighbours are untouched.
    for (std::size_t i = 0; i < ref.size(); i += 13) {
      ref[i] = max - ref[i];
      v.set(i, ref[i]);
    }
    for (std::size_t i = 0; i < ref.size(); ++i) REQUIRE(v[i] == ref[i]);
  }
}

TEST_CASE("wavelet matrix agrees with a linear scan") {
  std::mt19937_64 rng(11);
  for (std::uint32_t sigma : {1u, 2u, 5u, 64u, 300u}) {
    std::vector<std::uint32_t> s(3000);
    for (auto& x : s) x = static_cast<std::uint32_t>(rng() % (sigma + 1));
    const WaveletMatrix wm(s, sigma);
    CAPTURE(sigma);
    REQUIRE(wm.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) REQUIRE(wm.access(i + 1) == s[i]);
    for (std::uint32_t c = 0; c <= sigma; c += (sigma > 20 ? 17 : 1)) {
      std::uint64_t r = 0;
      std::uint64_t less = 0;
      for (std::size_t i = 0; i <= s.size(); ++i) {
        REQUIRE(wm.rank(c, i) == r);
        REQUIRE(wm.rank_less(c, i) == less);
        if (i < s.size()) {
          if (s[i] == c) {
            ++r;
            REQUIRE(wm.select(c, r) == i + 1);
          }
          less += s[i] < c;
        }
      }
      CHECK(wm.count(c) == r);
      CHECK_THROWS_AS(wm.select(c, r + 1), Error);
    }
  }
}
