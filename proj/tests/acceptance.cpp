// Runs every acceptance criterion once and prints one PASS/FAIL line each.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "ppart/equivariant.hpp"
#include "ppart/rng.hpp"
#include "ppart/solver.hpp"
#include "ppart/verify.hpp"

using namespace ppart;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

Outcome suites(const std::vector<VerifyReport>& reports) {
  Outcome out{true, {}};
  std::size_t checked = 0;
  for (const auto& r : reports)
    for (const auto& p : r.properties) {
      ++checked;
      if (!p.passed) {
        out.passed = false;
        out.detail += r.suite + "/" + p.name + " (" + p.detail + ") ";
      }
    }
  if (out.passed) out.detail = std::to_string(checked) + " properties in " + std::to_string(reports.size()) + " suites";
  return out;
}

Outcome model_map_facts() {
  std::vector<VerifyReport> reps;
  for (std::size_t s = 1; s <= 3; ++s) reps.push_back(verify_borsuk({s, 1, 0, 0.0}));
  return suites(reps);
}

Outcome spectrum_identities() {
  std::vector<VerifyReport> reps;
  for (std::size_t s = 1; s <= 10; ++s) reps.push_back(verify_spectrum(s, 2, 100));
  return suites(reps);
}

Outcome line_bound() {
  std::vector<VerifyReport> reps;
  for (std::size_t n = 2; n <= 3; ++n)
    for (std::size_t D = 2; D <= 8; ++D) reps.push_back(bench_line_cells(D, 1000 / 7 + 1, n, 3));
  return suites(reps);
}

Outcome flip_chain() {
  std::vector<VerifyReport> reps;
  for (std::size_t s = 1; s <= 4; ++s) reps.push_back(verify_flip_chain(s, 100, 4));
  return suites(reps);
}

Outcome mollifier_suite() { return suites({verify_mollifier(default_delta_grid(), 5, 50)}); }

Outcome continuation() {
  std::size_t successes = 0, orbit_failures = 0;
  const std::size_t seeds = 50;
  for (std::size_t i = 0; i < seeds; ++i) {
    const auto f = random_equivariant(2, 0.3, substream(6, "map", i));
    ContinuationConfig cfg;
    cfg.seed = substream(6, "continuation", i);
    const auto res = continuation_zero(f, cfg);
    if (!res.success() || !(res.residual < 1e-8)) continue;
    ++successes;
    if (*std::max_element(res.orbit_residuals.begin(), res.orbit_residuals.end()) >= 1e-8) ++orbit_failures;
  }
  std::ostringstream d;
  d << successes << "/" << seeds << " converged, " << orbit_failures << " orbit failures";
  return {successes * 10 >= seeds * 9 && orbit_failures == 0, d.str()};
}

Outcome point_partition() {
  std::size_t good = 0;
  std::int64_t worst = 0;
  double worst_slack = 0.0;
  const double limit = 4.0 * 1000.0 / 64.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(substream(seed, "points"));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Point> pts(1000);
    for (auto& p : pts) p = {u(rng), u(rng)};
    SolveConfig cfg;
    cfg.n = 2;
    cfg.s = 6;
    cfg.seed = seed;
    const auto rep = partition_points(pts, cfg);
    if (rep.bisection.size() != 6) return {false, "missing imbalance trace"};
    for (const auto& b : rep.bisection) worst_slack = std::max(worst_slack, b.max_relative_slack);
    worst = std::max(worst, rep.max_count);
    if (static_cast<double>(rep.max_count) <= limit) ++good;
  }
  std::ostringstream d;
  d << good << "/20 seeds within " << limit << ", worst max_count " << worst << ", worst slack/sqrt(q) "
    << std::setprecision(3) << worst_slack;
  return {good >= 18, d.str()};
}

Outcome variety_partition() {
  Rng rng(substream(8, "lines"));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<VarietySpec> lines;
  for (int i = 0; i < 200; ++i) {
    const double r = std::sqrt(u(rng)), a = 2 * M_PI * u(rng), th = M_PI * u(rng);
    lines.push_back(make_line({r * std::cos(a), r * std::sin(a)}, {std::cos(th), std::sin(th)}));
  }
  SolveConfig cfg;
  cfg.n = 2;
  cfg.s = 4;
  cfg.seed = 8;
  cfg.restarts = 8;
  cfg.sampling.method = CountMethod::exact_lines;
  const auto rep = partition_varieties(lines, cfg);

  const Embedding emb(2, 4);
  std::vector<std::int64_t> baseline;
  for (std::uint64_t b = 0; b < 20; ++b)
    baseline.push_back(counts(lines, emb.to_polys(random_point(4, substream(8, "baseline", b))), cfg.sampling).max());
  std::sort(baseline.begin(), baseline.end());
  const double median = 0.5 * static_cast<double>(baseline[9] + baseline[10]);
  const double reduction = 1.0 - static_cast<double>(rep.max_count) / median;
  std::ostringstream d;
  d << "D=" << rep.total_degree << " max_count " << rep.max_count << " bound_ratio " << std::setprecision(4)
    << rep.bound_ratio << ", baseline median " << median << ", reduction " << reduction * 100 << "%";
  return {rep.total_degree == 7 && rep.bound_ratio <= 8.0 && reduction >= 0.3, d.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "model map facts", 1.0, model_map_facts},
      {2, "spectrum identities", 5.0, spectrum_identities},
      {3, "line cell-entry bound", 30.0, line_bound},
      {4, "flip equivariance chain", 10.0, flip_chain},
      {5, "mollifier properties", 60.0, mollifier_suite},
      {6, "continuation", 60.0, continuation},
      {7, "point partitioning", 600.0, point_partition},
      {8, "variety partitioning", 600.0, variety_partition},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_seconds;
    const bool ok = out.passed && in_time;
    all = all && ok;
    std::cout << "criterion " << c.id << " [" << c.name << "]: " << (ok ? "PASS" : "FAIL") << " (" << std::fixed
              << std::setprecision(2) << secs << " s of " << c.budget_seconds << " s" << (in_time ? "" : ", over budget")
              << ")" << std::defaultfloat;
    if (!out.detail.empty()) std::cout << " " << out.detail;
    std::cout << "\n" << std::flush;
  }
  return all ? 0 : 1;
}
