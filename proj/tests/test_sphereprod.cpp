#include <doctest.h>

#include <cmath>

#include "ppart/error.hpp"
#include "ppart/rng.hpp"
#include "ppart/sphereprod.hpp"

using namespace ppart;

TEST_CASE("block sizes and dimension") {
  CHECK(block_size(0) == 2);
  CHECK(block_size(1) == 3);
  CHECK(block_size(3) == 9);
  for (std::size_t s = 1; s <= 6; ++s) CHECK(random_point(s, 1).intrinsic_dimension() == (std::size_t{1} << s) - 1);
}

TEST_CASE("XsPoint validates blocks") {
  CHECK_THROWS_AS(XsPoint({{1.0, 0.0, 0.0}}), DimensionMismatch);
  CHECK_THROWS_AS(XsPoint({{1.0, 1.0}}), InvalidArgument);
  CHECK_NOTHROW(XsPoint({{0.6, 0.8}, {0.0, 1.0, 0.0}}));
}

TEST_CASE("flip is a commuting family of involutions") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto x = random_point(4, seed);
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(flip(flip(x, j), j) == x);
      for (std::size_t k = 0; k < 4; ++k) CHECK(flip(flip(x, j), k) == flip(flip(x, k), j));
      const auto y = flip(x, j);
      for (std::size_t b = 0; b < 4; ++b) {
        double n2 = 0.0;
        for (double v : y.block(b)) n2 += v * v;
        CHECK(std::abs(n2 - 1.0) < 1e-12);
      }
    }
  }
  CHECK_THROWS(flip(random_point(2, 0), 2));
}

TEST_CASE("to_polys uses the first graded-lex monomials") {
  const XsPoint x({{0.6, 0.8}});
  const auto p = to_polys(x, 2);
  REQUIRE(p.size() == 1);
  CHECK(p[0](std::vector<double>{2.0, 5.0}) == doctest::Approx(0.6 + 0.8 * 2.0));
  const Embedding emb(2, 4);
  CHECK(emb.degrees() == std::vector<std::size_t>{1, 1, 2, 3});
  CHECK(emb.total_degree() == 7);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto y = random_point(4, seed);
    const auto polys = emb.to_polys(y);
    std::size_t total = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(polys[j].coeff_norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(polys[j].degree() <= emb.degrees()[j]);
      total += polys[j].degree();
      for (std::size_t i = block_size(j); i < polys[j].coeffs().size(); ++i) CHECK(polys[j].coeffs()[i] == 0.0);
    }
    Polynomial prod = polys[0];
    for (std::size_t j = 1; j < 4; ++j) prod = multiply(prod, polys[j]);
    CHECK(prod.degree() <= emb.total_degree());
    CHECK(prod.degree() == total);
  }
}

TEST_CASE("flipping a block negates exactly its polynomial") {
  const Embedding emb(3, 4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto x = random_point(4, seed);
    const auto p = emb.to_polys(x);
    for (std::size_t j = 0; j < 4; ++j) {
      const auto q = emb.to_polys(flip(x, j));
      for (std::size_t b = 0; b < 4; ++b)
        for (std::size_t i = 0; i < p[b].coeffs().size(); ++i)
          CHECK(q[b].coeffs()[i] == (b == j ? -p[b].coeffs()[i] : p[b].coeffs()[i]));
    }
  }
}

TEST_CASE("retract, tangent_step and random_point") {
  const auto x = random_point(3, 5);
  CHECK(retract(x.blocks()) == x);
  std::vector<std::vector<double>> dir;
  for (std::size_t j = 0; j < 3; ++j) dir.emplace_back(block_size(j), 1.0);
  CHECK(tangent_step(x, dir, 0.0) == x);
  const auto y = tangent_step(x, dir, 0.3);
  for (std::size_t j = 0; j < 3; ++j) {
    double n2 = 0.0;
    for (double v : y.block(j)) n2 += v * v;
    CHECK(std::abs(n2 - 1.0) < 1e-12);
  }
  CHECK(random_point(3, 5) == x);
  CHECK_FALSE(random_point(3, 6) == x);
  CHECK_THROWS_AS(retract({{0.0, 0.0}}), InvalidArgument);
}

TEST_CASE("embedding is injective on sampled points") {
  const Embedding emb(2, 3);
  const auto x = random_point(3, 1), y = random_point(3, 2);
  const auto px = emb.to_polys(x), py = emb.to_polys(y);
  bool differ = false;
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < px[j].coeffs().size(); ++i) differ = differ || px[j].coeffs()[i] != py[j].coeffs()[i];
  CHECK(differ);
}
