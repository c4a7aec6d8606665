#include <doctest.h>

#include <cmath>

#include "ppart/error.hpp"
#include "ppart/mollifier.hpp"
#include "ppart/rng.hpp"
#include "ppart/sphereprod.hpp"
#include "ppart/verify.hpp"

using namespace ppart;

namespace {

std::vector<BasisPtr> linear_bases() { return {make_basis(2, 1), make_basis(2, 1)}; }

}  // namespace

TEST_CASE("eta examples") {
  CHECK(eta(0.1, 0.05) == 0.0);
  CHECK(eta(0.1, 0.30) == 1.0);
  CHECK(eta(0.1, 0.15) == doctest::Approx(0.5));
  CHECK(eta(0.1, 0.1) == 0.0);
  CHECK(eta(0.1, 0.2) == 1.0);
  double last = 0.0;
  for (double t = -1.0; t < 1.0; t += 0.001) {
    const double v = eta(0.1, t);
    CHECK(v >= last);
    last = v;
  }
}

TEST_CASE("schedule certificate and monotonicity") {
  const auto bases = linear_bases();
  const auto half = schedule(0.5, bases);
  CHECK(half.grad_bound * half.delta < half.epsilon);
  CHECK(half.radius == doctest::Approx(2.0));

  const Embedding emb(2, 4);
  double last_eps = INFINITY, last_r = 0.0;
  for (double delta : default_delta_grid()) {
    const auto cfg = schedule(delta, emb.bases());
    CHECK(cfg.grad_bound * delta < cfg.epsilon);
    CHECK(cfg.epsilon < last_eps);
    CHECK(cfg.radius > last_r);
    CHECK(cfg.grad_bound >= grad_bound(*emb.bases().back(), cfg.radius + 1.0));
    last_eps = cfg.epsilon;
    last_r = cfg.radius;
  }
  CHECK_THROWS_AS(schedule(1.0, bases), InvalidArgument);
  CHECK_THROWS_AS(schedule(0.0, bases), InvalidArgument);
  CHECK(default_delta_grid().size() == 12);
  CHECK(default_delta_grid().back() == std::ldexp(1.0, -12));
}

TEST_CASE("i_delta range, determinism and separation") {
  Rng rng(1);
  const auto bases = linear_bases();
  for (int t = 0; t < 20; ++t) {
    const auto cfg = schedule(std::ldexp(1.0, -(1 + t % 8)), bases, 512, t);
    const std::vector<Polynomial> p{Polynomial(bases[0], uniform_on_sphere(rng, 3)),
                                    Polynomial(bases[1], uniform_on_sphere(rng, 3))};
    const auto line = make_line(uniform_in_ball(rng, 2, 1.0), uniform_on_sphere(rng, 2));
    for (std::uint32_t w = 0; w < 4; ++w) {
      const double v = i_delta(line, p, SignVector{w}, cfg);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      CHECK(v == i_delta(line, p, SignVector{w}, cfg));
    }
  }
}

TEST_CASE("far-away cell gives zero and a deep witness gives one") {
  const auto bases = linear_bases();
  // P_1 = y (normalized), P_2 = x. The line y = 1 never enters y < 0.
  const std::vector<Polynomial> p{Polynomial(bases[0], {0, 0, 1}), Polynomial(bases[1], {0, 1, 0})};
  const auto line = make_line({0, 1}, {1, 0});
  const auto cfg = schedule(0.125, bases, 2048, 3);
  CHECK(i_delta(line, p, SignVector{0b01}, cfg) == 0.0);
  CHECK(i_delta(line, p, SignVector{0b11}, cfg) == 0.0);
  // q = (1, 1) has min |P_i| = 1.
  const auto small = schedule(std::ldexp(1.0, -8), bases, 4096, 3);
  REQUIRE(witness_saturates(1.0, small));
  CHECK(i_delta(line, p, SignVector{0b00}, small) == 1.0);
  CHECK(i_delta(line, p, SignVector{0b10}, small) == 1.0);
}

TEST_CASE("f_delta_v is the transform of the mollified table") {
  const auto bases = linear_bases();
  const auto cfg = schedule(std::ldexp(1.0, -8), bases, 4096, 5);
  // A circle of radius 0.3 centered at (2, 2) lies inside the cell where
  // P_1 = y - 1 > 0 and P_2 = x - 1 > 0.
  const std::vector<Polynomial> p{Polynomial(bases[0], {-1 / std::sqrt(2.0), 0, 1 / std::sqrt(2.0)}),
                                  Polynomial(bases[1], {-1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0})};
  CHECK(f_delta_v({}, p, SignVector{1}, cfg) == 0.0);
  const std::vector<VarietySpec> gamma{make_circle({2, 2}, 0.3)};
  for (std::uint32_t v = 1; v < 4; ++v) CHECK(f_delta_v(gamma, p, SignVector{v}, cfg) == doctest::Approx(1.0));
  CHECK_THROWS_AS(f_delta_v(gamma, p, SignVector{0}, cfg), InvalidArgument);
}

TEST_CASE("flip equivariance of f_delta_v with shared streams") {
  const Embedding emb(2, 2);
  Rng rng(4);
  std::vector<VarietySpec> gamma;
  for (int i = 0; i < 5; ++i) gamma.push_back(make_line(uniform_in_ball(rng, 2, 1.0), uniform_on_sphere(rng, 2)));
  const auto cfg = schedule(0.125, emb.bases(), 1024, 8);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto x = random_point(2, seed);
    for (std::size_t j = 0; j < 2; ++j)
      for (std::uint32_t v = 1; v < 4; ++v) {
        const double a = f_delta_v(gamma, emb.to_polys(x), SignVector{v}, cfg);
        const double b = f_delta_v(gamma, emb.to_polys(flip(x, j)), SignVector{v}, cfg);
        CHECK(b == doctest::Approx(SignVector{v}[j] ? -a : a).epsilon(1e-12));
      }
  }
}

TEST_CASE("i_delta is Lipschitz on nearby inputs") {
  const auto bases = linear_bases();
  const auto cfg = schedule(0.25, bases, 4096, 1);
  Rng rng(7);
  const auto line = make_line({0, 0.3}, {1, 0});
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto c = uniform_on_sphere(rng, 3);
    auto d = c;
    for (auto& v : d) v += 1e-4;
    const std::vector<Polynomial> p{Polynomial(bases[0], c), Polynomial(bases[1], {0, 1, 0})};
    const std::vector<Polynomial> q{Polynomial(bases[0], d), Polynomial(bases[1], {0, 1, 0})};
    for (std::uint32_t w = 0; w < 4; ++w)
      worst = std::max(worst, std::abs(i_delta(line, p, SignVector{w}, cfg) - i_delta(line, q, SignVector{w}, cfg)));
  }
  CHECK(worst < 0.05);
}

TEST_CASE("mollifier suite") { CHECK(verify_mollifier(default_delta_grid(), 2, 10).passed()); }
