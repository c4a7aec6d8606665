#include <doctest.h>

#include <random>

#include "ppart/error.hpp"
#include "ppart/spectrum.hpp"
#include "ppart/verify.hpp"

using namespace ppart;

TEST_CASE("wht examples") {
  const CellCounts c(2, {2, 1, 1, 0});
  const auto g = wht(c);
  CHECK(g.values == std::vector<std::int64_t>{4, 2, 2, 0});
  const auto flat = wht(CellCounts(2, {3, 3, 3, 3}));
  for (std::uint32_t v = 1; v < 4; ++v) CHECK(flat[SignVector{v}] == 0);
  const auto delta = wht(CellCounts(3, {1, 0, 0, 0, 0, 0, 0, 0}));
  for (auto v : delta.values) CHECK(v == 1);
}

TEST_CASE("wht against direct signed summation") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int64_t> dist(0, 100);
  for (std::size_t s = 1; s <= 7; ++s) {
    std::vector<std::int64_t> vals(std::size_t{1} << s);
    for (auto& v : vals) v = dist(rng);
    const CellCounts c(s, vals);
    const auto g = wht(c);
    CHECK(g.values[0] == c.total());
    for (std::uint32_t v = 0; v < vals.size(); ++v) {
      std::int64_t sum = 0;
      for (std::uint32_t w = 0; w < vals.size(); ++w) sum += parity(SignVector{v}, SignVector{w}) ? -vals[w] : vals[w];
      CHECK(g.values[v] == sum);
    }
    // Applying the butterfly twice multiplies by 2^s.
    auto twice = g.values;
    fwht_in_place(std::span<std::int64_t>(twice));
    for (std::size_t w = 0; w < vals.size(); ++w) CHECK(twice[w] == (std::int64_t{1} << s) * vals[w]);
    CHECK(inverse_wht(g) == c);
  }
}

TEST_CASE("real transform agrees with the integer one") {
  const std::vector<double> t{2, 1, 1, 0};
  CHECK(wht(std::span<const double>(t)) == std::vector<double>{4, 2, 2, 0});
}

TEST_CASE("is_equidistributed examples") {
  CHECK(is_equidistributed(CellCounts(2, {3, 3, 3, 3})));
  CHECK_FALSE(is_equidistributed(CellCounts(2, {2, 1, 1, 0})));
  CHECK(is_equidistributed(CellCounts(1, {5, 5})));
}

TEST_CASE("counting identity examples") {
  const auto sides = lemma_identity_check(CellCounts(2, {2, 1, 1, 0}), SignVector{1});
  CHECK(sides.lhs == 2);
  CHECK(sides.rhs == 2);
  for (std::uint32_t u = 1; u < 8; ++u) {
    const auto flat = lemma_identity_check(CellCounts(3, std::vector<std::int64_t>(8, 4)), SignVector{u});
    CHECK(flat.lhs == 0);
    CHECK(flat.rhs == 0);
  }
  CHECK_THROWS_AS(lemma_identity_check(CellCounts(2), SignVector{0}), InvalidArgument);
}

TEST_CASE("spectrum suites") {
  for (std::size_t s = 1; s <= 4; ++s) CHECK(verify_spectrum(s, 3, 30).passed());
  CHECK(verify_spectrum(9, 3, 10).passed());
}

TEST_CASE("inverse rejects tables that are not transforms of integers") {
  Spectrum g{1, {1, 0}};
  CHECK_THROWS(inverse_wht(g));
}
