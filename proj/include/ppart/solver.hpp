#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ppart/cells.hpp"
#include "ppart/mollifier.hpp"
#include "ppart/spectrum.hpp"
#include "ppart/sphereprod.hpp"
#include "ppart/varieties.hpp"

namespace ppart {

enum class Objective { discrete, smooth };

struct SolveConfig {
  std::size_t n = 2;
  std::size_t s = 2;
  std::size_t restarts = 4;
  /// Annealing grid for delta, strictly decreasing in (0, 1).
  std::vector<double> delta_grid = default_delta_grid();
  std::size_t steps_per_stage = 60;
  double initial_step = 0.6;
  /// Step size is multiplied by this after every proposal, floored at min_step.
  double step_decay = 0.995;
  double min_step = 1e-3;
  /// Metropolis temperature; 0 accepts only non-increasing moves.
  double temperature = 0.0;
  std::size_t mc_count = 256;
  std::uint64_t seed = 0;
  Objective objective = Objective::discrete;
  SamplingConfig sampling;
  /// Worker threads for restarts; 0 uses the hardware concurrency.
  unsigned threads = 0;
};

struct TraceEntry {
  std::size_t restart = 0;
  std::size_t stage = 0;
  double delta = 0.0;
  double step = 0.0;
  double objective = 0.0;
  bool accepted = false;
};

struct BisectionStep {
  std::size_t step = 0;
  std::size_t parts = 0;
  /// max over parts of |#positive - #negative|.
  std::int64_t max_imbalance = 0;
  /// max over parts of max(#positive, #negative) - ceil(q / 2).
  std::int64_t max_slack = 0;
  /// max over parts of that slack divided by sqrt(q).
  double max_relative_slack = 0.0;
};

struct PartitionReport {
  std::size_t n = 0;
  std::size_t s = 0;
  /// Dimension of the partitioned objects (0 for point sets).
  std::size_t k = 0;
  std::size_t num_objects = 0;
  std::vector<std::size_t> degrees;
  std::size_t total_degree = 0;
  XsPoint x;
  std::vector<Polynomial> pvec;
  CellCounts counts{1};
  Spectrum spectrum;
  std::int64_t max_count = 0;
  /// max_count * D^(n - k) / |objects|, 0 when there are none.
  double bound_ratio = 0.0;
  double objective = 0.0;
  std::size_t best_restart = 0;
  std::vector<TraceEntry> trace;
  std::vector<BisectionStep> bisection;
};

/// sum over v != 0 of G_v^2.
double objective_discrete(const CellCounts& counts);
double objective_discrete(std::span<const VarietySpec> varieties, const Embedding& emb, const XsPoint& x,
                          const SamplingConfig& sampling);
/// sum over v != 0 of f_{delta,v}^2 for the counter's configuration.
double objective_smooth(const MollifiedCounter& counter, const Embedding& emb, const XsPoint& x);

double bound_ratio(std::int64_t max_count, std::size_t total_degree, std::size_t n, std::size_t k,
                   std::size_t objects);

/// Multi-start annealed search on X_s. The report always carries discrete counts.
PartitionReport partition_varieties(std::span<const VarietySpec> varieties, const SolveConfig& cfg);

/// Sequential polynomial bisection of a point set.
PartitionReport partition_points(std::span<const Point> points, const SolveConfig& cfg);

/// Cell counts of points under pvec; points on the zero set are not counted.
CellCounts point_counts(std::span<const Point> points, std::span<const Polynomial> pvec, double tau);

}  // namespace ppart
