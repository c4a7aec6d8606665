#include "ppart/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ppart/error.hpp"
#include "ppart/rng.hpp"
#include "ppart/spectrum.hpp"

namespace ppart {

double eta(double eps, double t) {
  if (!(eps > 0)) throw InvalidArgument("eta: epsilon must be positive");
  if (t <= eps) return 0.0;
  if (t >= 2.0 * eps) return 1.0;
  return (t - eps) / eps;
}

double schedule_radius(double delta) { return 1.0 + std::log2(1.0 / delta); }

MollConfig schedule(double delta, std::span<const BasisPtr> bases, std::size_t mc_count, std::uint64_t seed) {
  if (!(delta > 0 && delta < 1)) throw InvalidArgument("schedule: delta must lie in (0, 1)");
  if (bases.empty()) throw InvalidArgument("schedule: no bases");
  MollConfig cfg;
  cfg.delta = delta;
  cfg.radius = schedule_radius(delta);
  cfg.grad_bound = 0.0;
  for (const auto& b : bases) cfg.grad_bound = std::max(cfg.grad_bound, grad_bound(*b, cfg.radius + 1.0));
  cfg.epsilon = 2.0 * cfg.grad_bound * delta;
  cfg.mc_count = mc_count;
  cfg.seed = seed;
  if (cfg.grad_bound == 0.0) cfg.epsilon = delta;  // constant factors: any positive eps certifies
  if (!(cfg.grad_bound * delta < cfg.epsilon) || !std::isfinite(cfg.epsilon)) {
    std::ostringstream msg;
    msg << "schedule infeasible: delta=" << delta << " B=" << cfg.grad_bound << " eps=" << cfg.epsilon;
    throw ScheduleInfeasible(msg.str());
  }
  return cfg;
}

std::vector<double> default_delta_grid() {
  std::vector<double> grid;
  for (int e = 1; e <= 12; ++e) grid.push_back(std::ldexp(1.0, -e));
  return grid;
}

std::vector<double> mollified_indicators(const WeightedCloud& cloud, std::size_t n,
                                         std::span<const Polynomial> pvec, const MollConfig& cfg) {
  const std::size_t s = pvec.size();
  if (s < 1 || s > kMaxFactors) throw InvalidArgument("mollified_indicators: bad factor count");
  std::vector<double> integral(std::size_t{1} << s, 0.0);
  for (const auto& x : cloud.points) {
    std::uint32_t w = 0;
    double min_abs = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < s; ++j) {
      const double v = pvec[j](x);
      if (v < 0) w |= 1U << j;
      min_abs = std::min(min_abs, std::abs(v));
    }
    // Points on Z(P) lie in no open cell; the ramp is 0 there anyway.
    if (min_abs == 0.0) continue;
    integral[w] += cloud.weight * eta(cfg.epsilon, min_abs);
  }
  const double scale = std::pow(cfg.delta, -static_cast<double>(n));
  for (auto& v : integral) v = std::clamp(eta(cfg.epsilon, v * scale), 0.0, 1.0);
  return integral;
}

WeightedCloud mollifier_cloud(const VarietySpec& gamma, const MollConfig& cfg) {
  return tube_sample(gamma, cfg.delta, cfg.radius, cfg.mc_count, substream(cfg.seed, "tube"));
}

double i_delta(const VarietySpec& gamma, std::span<const Polynomial> pvec, SignVector w, const MollConfig& cfg) {
  auto table = mollified_indicators(mollifier_cloud(gamma, cfg), gamma.n, pvec, cfg);
  if (w.bits >= table.size()) throw InvalidArgument("i_delta: sign vector out of range");
  return table[w.bits];
}

MollifiedCounter::MollifiedCounter(std::span<const VarietySpec> varieties, const MollConfig& cfg) : cfg_(cfg) {
  for (const auto& g : varieties) {
    if (n_ == 0) n_ = g.n;
    if (g.n != n_) throw DimensionMismatch("MollifiedCounter: varieties live in different dimensions");
    clouds_.push_back(mollifier_cloud(g, cfg));
  }
}

std::vector<double> MollifiedCounter::table(std::span<const Polynomial> pvec) const {
  std::vector<double> sum(std::size_t{1} << pvec.size(), 0.0);
  for (const auto& cloud : clouds_) {
    auto t = mollified_indicators(cloud, n_, pvec, cfg_);
    for (std::size_t w = 0; w < sum.size(); ++w) sum[w] += t[w];
  }
  return sum;
}

double f_delta_v(std::span<const VarietySpec> varieties, std::span<const Polynomial> pvec, SignVector v,
                 const MollConfig& cfg) {
  if (v.bits == 0) throw InvalidArgument("f_delta_v: v must be nonzero");
  if (v.bits >> pvec.size()) throw InvalidArgument("f_delta_v: v out of range");
  if (varieties.empty()) return 0.0;
  const auto table = MollifiedCounter(varieties, cfg).table(pvec);
  return wht(std::span<const double>(table))[v.bits];
}

bool witness_saturates(double c, const MollConfig& cfg) {
  return cfg.delta * cfg.grad_bound <= c / 2.0 && cfg.epsilon <= c / 4.0;
}

}  // namespace ppart
