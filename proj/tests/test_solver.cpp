#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ppart/error.hpp"
#include "ppart/rng.hpp"
#include "ppart/solver.hpp"

using namespace ppart;

namespace {

SolveConfig small_config(std::size_t s, std::uint64_t seed) {
  SolveConfig cfg;
  cfg.n = 2;
  cfg.s = s;
  cfg.seed = seed;
  cfg.restarts = 2;
  cfg.steps_per_stage = 10;
  cfg.delta_grid = {0.5, 0.25, 0.125};
  cfg.sampling.count = 256;
  return cfg;
}

std::vector<VarietySpec> crossing_lines() { return {make_line({0, 0}, {1, 0}), make_line({0, 0}, {0, 1})}; }

}  // namespace

TEST_CASE("objective_discrete") {
  CHECK(objective_discrete(CellCounts(2, {3, 3, 3, 3})) == 0.0);
  CHECK(objective_discrete(CellCounts(2, {2, 1, 1, 0})) == 8.0);
  const Embedding emb(2, 3);
  Rng rng(1);
  std::vector<VarietySpec> gamma;
  for (int i = 0; i < 6; ++i) gamma.push_back(make_line(uniform_in_ball(rng, 2, 1.0), uniform_on_sphere(rng, 2)));
  SamplingConfig sampling;
  sampling.count = 200;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto x = random_point(3, seed);
    const double base = objective_discrete(gamma, emb, x, sampling);
    for (std::size_t j = 0; j < 3; ++j) CHECK(objective_discrete(gamma, emb, flip(x, j), sampling) == base);
  }
}

TEST_CASE("objective_smooth") {
  const Embedding emb(2, 2);
  const auto cfg = schedule(0.125, emb.bases(), 512, 2);
  const std::vector<VarietySpec> none;
  CHECK(objective_smooth(MollifiedCounter(none, cfg), emb, random_point(2, 0)) == 0.0);

  Rng rng(3);
  std::vector<VarietySpec> gamma;
  for (int i = 0; i < 4; ++i) gamma.push_back(make_line(uniform_in_ball(rng, 2, 1.0), uniform_on_sphere(rng, 2)));
  const MollifiedCounter counter(gamma, cfg);
  const auto x = random_point(2, 4);
  const double base = objective_smooth(counter, emb, x);
  for (std::size_t j = 0; j < 2; ++j) CHECK(objective_smooth(counter, emb, flip(x, j)) == doctest::Approx(base));
}

TEST_CASE("smooth and discrete objectives agree when varieties sit deep inside cells") {
  // Small circles far from both zero sets P_1 = y, P_2 = x.
  const Embedding emb(2, 2);
  const XsPoint x({{1.0, 0.0}, {0.0, 0.0, 1.0}});
  const auto pvec = emb.to_polys(x);
  REQUIRE(pvec[0].coeffs()[0] == 1.0);
  // P_1 is the constant 1 here, so only P_2 = y splits the plane.
  const std::vector<VarietySpec> gamma{make_circle({1, 2}, 0.2), make_circle({-1, -2}, 0.2), make_circle({3, 2}, 0.2)};
  SamplingConfig sampling;
  const double discrete = objective_discrete(gamma, emb, x, sampling);
  const auto cfg = schedule(std::ldexp(1.0, -8), emb.bases(), 2048, 1);
  const double smooth = objective_smooth(MollifiedCounter(gamma, cfg), emb, x);
  CHECK(smooth == doctest::Approx(discrete).epsilon(1e-6));
}

TEST_CASE("two crossing lines") {
  const auto gamma = crossing_lines();
  auto cfg = small_config(2, 1);
  cfg.restarts = 4;
  cfg.steps_per_stage = 60;
  const auto rep = partition_varieties(gamma, cfg);
  CHECK(rep.max_count <= 2);
  CHECK(rep.counts.total() <= static_cast<std::int64_t>(gamma.size() * (rep.total_degree + 1)));
  // Exhaustive search over a coarse grid of X_2. Configurations that leave a
  // line inside a zero set (so it enters no cell at all) are not feasible.
  const Embedding emb(2, 2);
  double best = INFINITY;
  const int steps = 16;
  for (int a = 0; a < steps; ++a)
    for (int b = 0; b < steps; ++b)
      for (int c = 0; c < steps; ++c) {
        const double t0 = M_PI * (a + 0.5) / steps, th = M_PI * (b + 0.5) / steps, ph = 2 * M_PI * (c + 0.5) / steps;
        const XsPoint x({{std::cos(t0), std::sin(t0)},
                         {std::cos(th), std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph)}});
        const auto pvec = emb.to_polys(x);
        bool feasible = true;
        for (const auto& g : gamma) {
          const auto entered = cells_entered(g, pvec, cfg.sampling);
          feasible = feasible && std::find(entered.begin(), entered.end(), true) != entered.end();
        }
        if (feasible) best = std::min(best, objective_discrete(gamma, emb, x, cfg.sampling));
      }
  CHECK(std::isfinite(best));
  CHECK(rep.objective <= best);
}

TEST_CASE("single line stays within the line bound") {
  const std::vector<VarietySpec> gamma{make_line({0.2, 0.1}, {0.6, 0.8})};
  auto cfg = small_config(3, 2);
  cfg.sampling.method = CountMethod::exact_lines;
  const auto rep = partition_varieties(gamma, cfg);
  CHECK(rep.max_count <= 1);
  CHECK(rep.counts.total() <= static_cast<std::int64_t>(rep.total_degree + 1));
}

TEST_CASE("report consistency, trace monotonicity and determinism") {
  Rng rng(5);
  std::vector<VarietySpec> gamma;
  for (int i = 0; i < 20; ++i) gamma.push_back(make_line(uniform_in_ball(rng, 2, 1.0), uniform_on_sphere(rng, 2)));
  auto cfg = small_config(3, 7);
  cfg.sampling.method = CountMethod::exact_lines;
  const auto rep = partition_varieties(gamma, cfg);
  CHECK(counts(gamma, rep.pvec, cfg.sampling) == rep.counts);
  CHECK(rep.max_count == rep.counts.max());
  CHECK(rep.spectrum.values == wht(rep.counts).values);
  CHECK(rep.counts.total() <= static_cast<std::int64_t>(gamma.size() * (rep.total_degree + 1)));
  CHECK(rep.bound_ratio == doctest::Approx(rep.max_count * std::pow(rep.total_degree, 1.0) / 20.0));
  for (std::size_t i = 1; i < rep.trace.size(); ++i)
    if (rep.trace[i].restart == rep.trace[i - 1].restart) CHECK(rep.trace[i].objective <= rep.trace[i - 1].objective);
  const auto again = partition_varieties(gamma, cfg);
  CHECK(again.x == rep.x);
  CHECK(again.counts == rep.counts);
  CHECK(again.trace.size() == rep.trace.size());
  cfg.threads = 1;
  CHECK(partition_varieties(gamma, cfg).x == rep.x);
}

TEST_CASE("smooth objective run") {
  Rng rng(6);
  std::vector<VarietySpec> gamma;
  for (int i = 0; i < 6; ++i) gamma.push_back(make_circle(uniform_in_ball(rng, 2, 1.0), 0.3));
  auto cfg = small_config(2, 3);
  cfg.objective = Objective::smooth;
  cfg.mc_count = 128;
  cfg.steps_per_stage = 5;
  const auto rep = partition_varieties(gamma, cfg);
  CHECK(counts(gamma, rep.pvec, cfg.sampling) == rep.counts);
  CHECK(rep.trace.size() == cfg.restarts * cfg.delta_grid.size() * cfg.steps_per_stage);
}

TEST_CASE("empty input and config validation") {
  const auto rep = partition_varieties({}, small_config(2, 0));
  CHECK(rep.max_count == 0);
  CHECK(rep.bound_ratio == 0.0);
  auto bad = small_config(2, 0);
  bad.restarts = 0;
  CHECK_THROWS_AS(partition_varieties(crossing_lines(), bad), InvalidArgument);
  bad = small_config(2, 0);
  bad.delta_grid = {0.25, 0.5};
  CHECK_THROWS_AS(partition_varieties(crossing_lines(), bad), InvalidArgument);
}

TEST_CASE("partition_points basics") {
  auto cfg = small_config(3, 1);
  const std::vector<Point> one{{0.3, 0.7}};
  const auto rep = partition_points(one, cfg);
  CHECK(rep.counts.total() == 1);
  CHECK(rep.max_count == 1);
  CHECK(rep.bisection.size() == 3);
  CHECK(point_counts(one, rep.pvec, cfg.sampling.tau) == rep.counts);
}

TEST_CASE("symmetric point sets split exactly under odd polynomials") {
  Rng rng(8);
  std::vector<Point> pts;
  for (int i = 0; i < 200; ++i) {
    const auto p = uniform_in_ball(rng, 2, 1.0);
    pts.push_back(p);
    pts.push_back({-p[0], -p[1]});
  }
  // The first factor uses the monomials (1, x); x alone is odd.
  const std::vector<Polynomial> odd{Polynomial(make_basis(2, 1), {0.0, 1.0, 0.0})};
  const auto c = point_counts(pts, odd, 0.0);
  CHECK(c[SignVector{0}] == c[SignVector{1}]);
  auto cfg = small_config(2, 2);
  const auto rep = partition_points(pts, cfg);
  CHECK(rep.bisection[0].max_imbalance == 0);
}

TEST_CASE("partition_points on random points") {
  Rng rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Point> pts(400);
  for (auto& p : pts) p = {u(rng), u(rng)};
  auto cfg = small_config(4, 3);
  const auto rep = partition_points(pts, cfg);
  CHECK(rep.counts.total() == 400);
  CHECK(point_counts(pts, rep.pvec, cfg.sampling.tau) == rep.counts);
  CHECK(rep.max_count <= 4 * 400 / 16);
  for (const auto& step : rep.bisection) CHECK(step.max_relative_slack <= 3.0);
  CHECK(partition_points(pts, cfg).x == rep.x);
}
