#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ppart/cells.hpp"
#include "ppart/polyalg.hpp"
#include "ppart/varieties.hpp"

namespace ppart {

/// Piecewise-linear ramp: 0 for t <= eps, 1 for t >= 2 eps, linear between.
double eta(double eps, double t);

struct MollConfig {
  double delta = 0.0;
  double epsilon = 0.0;
  double radius = 1.0;
  /// Certified gradient bound over B_{radius + 1} for every factor basis.
  double grad_bound = 0.0;
  std::size_t mc_count = 4096;
  std::uint64_t seed = 0;
};

/// R(delta) = 1 + log2(1/delta).
double schedule_radius(double delta);

/// Certified configuration for 0 < delta < 1:
///   R = 1 + log2(1/delta),  B = max_j grad_bound(basis_j, R + 1),  eps = 2 B delta.
/// Throws ScheduleInfeasible unless B * delta < eps holds.
MollConfig schedule(double delta, std::span<const BasisPtr> bases, std::size_t mc_count = 4096,
                    std::uint64_t seed = 0);

/// Geometric grid 0.5, 0.25, ..., 2^-12.
std::vector<double> default_delta_grid();

/// I_delta^gamma(P, w) for every w at once, from one tube cloud:
///   eta_eps( delta^-n * sum over cloud points in O(P, w) of weight * eta_eps(min_i |P_i|) ).
std::vector<double> mollified_indicators(const WeightedCloud& cloud, std::size_t n,
                                         std::span<const Polynomial> pvec, const MollConfig& cfg);

/// The tube cloud i_delta uses for gamma under cfg.
WeightedCloud mollifier_cloud(const VarietySpec& gamma, const MollConfig& cfg);

double i_delta(const VarietySpec& gamma, std::span<const Polynomial> pvec, SignVector w,
               const MollConfig& cfg);

/// Table sum_gamma I_delta^gamma(P, w), with tube clouds cached so repeated
/// evaluations at nearby P share their random numbers.
class MollifiedCounter {
 public:
  MollifiedCounter(std::span<const VarietySpec> varieties, const MollConfig& cfg);

  const MollConfig& config() const { return cfg_; }
  std::vector<double> table(std::span<const Polynomial> pvec) const;

 private:
  MollConfig cfg_;
  std::size_t n_ = 0;
  std::vector<WeightedCloud> clouds_;
};

/// f_{delta,v}(P): the transform of the mollified table at frequency v != 0.
double f_delta_v(std::span<const VarietySpec> varieties, std::span<const Polynomial> pvec, SignVector v,
                 const MollConfig& cfg);

/// Smallest grid-independent requirement for Property-4 style saturation at a
/// witness q with min_i |P_i(q)| = c: delta * B <= c / 2 keeps |P_i| >= c/2 on
/// B_delta(q), and eps(delta) <= c / 4 makes the inner ramp equal 1 there.
bool witness_saturates(double c, const MollConfig& cfg);

}  // namespace ppart
