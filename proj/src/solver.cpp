#include "ppart/solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include <Eigen/Dense>

#include "ppart/error.hpp"
#include "ppart/rng.hpp"

namespace ppart {

double objective_discrete(const CellCounts& counts) {
  const Spectrum g = wht(counts);
  double sum = 0.0;
  for (std::size_t v = 1; v < g.values.size(); ++v) sum += static_cast<double>(g.values[v]) * static_cast<double>(g.values[v]);
  return sum;
}

double objective_discrete(std::span<const VarietySpec> varieties, const Embedding& emb, const XsPoint& x,
                          const SamplingConfig& sampling) {
  const auto pvec = emb.to_polys(x);
  return objective_discrete(counts(varieties, pvec, sampling));
}

double objective_smooth(const MollifiedCounter& counter, const Embedding& emb, const XsPoint& x) {
  const auto pvec = emb.to_polys(x);
  const auto spectrum = wht(std::span<const double>(counter.table(pvec)));
  double sum = 0.0;
  for (std::size_t v = 1; v < spectrum.size(); ++v) sum += spectrum[v] * spectrum[v];
  return sum;
}

double bound_ratio(std::int64_t max_count, std::size_t total_degree, std::size_t n, std::size_t k,
                   std::size_t objects) {
  if (objects == 0) return 0.0;
  return static_cast<double>(max_count) * std::pow(static_cast<double>(total_degree), static_cast<double>(n - k)) /
         static_cast<double>(objects);
}

CellCounts point_counts(std::span<const Point> points, std::span<const Polynomial> pvec, double tau) {
  CellCounts c(pvec.size());
  for (const auto& p : points)
    if (auto w = sign_vector(pvec, p, tau)) ++c[*w];
  return c;
}

namespace {

void check_config(const SolveConfig& cfg) {
  if (cfg.restarts < 1) throw InvalidArgument("SolveConfig: restarts must be at least 1");
  if (cfg.s < 1 || cfg.s > kMaxFactors) throw InvalidArgument("SolveConfig: need 1 <= s <= 20");
  if (cfg.n < 1) throw InvalidArgument("SolveConfig: n must be positive");
  if (cfg.delta_grid.empty()) throw InvalidArgument("SolveConfig: empty delta grid");
  for (std::size_t i = 0; i < cfg.delta_grid.size(); ++i) {
    const double d = cfg.delta_grid[i];
    if (!(d > 0.0 && d < 1.0)) throw InvalidArgument("SolveConfig: delta must lie in (0, 1)");
    if (i > 0 && !(d < cfg.delta_grid[i - 1])) throw InvalidArgument("SolveConfig: delta grid must decrease");
  }
}

// Runs job(i) for i in [0, count) on up to `threads` workers and returns the
// results in index order.
template <typename Result, typename Job>
std::vector<Result> run_parallel(std::size_t count, unsigned threads, Job job) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  std::vector<Result> out(count);
  for (std::size_t begin = 0; begin < count; begin += threads) {
    const std::size_t end = std::min(count, begin + threads);
    std::vector<std::future<Result>> futures;
    for (std::size_t i = begin; i < end; ++i) futures.push_back(std::async(std::launch::async, job, i));
    for (std::size_t i = begin; i < end; ++i) out[i] = futures[i - begin].get();
  }
  return out;
}

std::vector<std::vector<double>> block_direction(const XsPoint& x, std::size_t j, Rng& rng) {
  std::normal_distribution<double> normal;
  std::vector<std::vector<double>> dir(x.s());
  for (std::size_t b = 0; b < x.s(); ++b) dir[b].assign(x.block(b).size(), 0.0);
  for (auto& d : dir[j]) d = normal(rng);
  double norm = 0.0;
  for (double d : dir[j]) norm += d * d;
  norm = std::sqrt(norm);
  if (norm > 0.0)
    for (auto& d : dir[j]) d /= norm;
  return dir;
}

struct RestartResult {
  XsPoint x;
  double discrete = 0.0;
  std::vector<TraceEntry> trace;
};

RestartResult run_restart(std::span<const VarietySpec> varieties, const Embedding& emb, const SolveConfig& cfg,
                          std::size_t restart) {
  Rng rng(substream(cfg.seed, "restart", restart));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RestartResult res;
  res.x = random_point(cfg.s, substream(cfg.seed, "start", restart));
  double step = cfg.initial_step;

  for (std::size_t stage = 0; stage < cfg.delta_grid.size(); ++stage) {
    const double delta = cfg.delta_grid[stage];
    std::optional<MollifiedCounter> counter;
    if (cfg.objective == Objective::smooth)
      counter.emplace(varieties, schedule(delta, emb.bases(), cfg.mc_count, substream(cfg.seed, "mollifier", stage)));
    auto objective = [&](const XsPoint& x) {
      return counter ? objective_smooth(*counter, emb, x) : objective_discrete(varieties, emb, x, cfg.sampling);
    };
    double current = objective(res.x);
    for (std::size_t k = 0; k < cfg.steps_per_stage; ++k) {
      const std::size_t j = static_cast<std::size_t>(rng() % cfg.s);
      const XsPoint y = tangent_step(res.x, block_direction(res.x, j, rng), step);
      const double value = objective(y);
      bool accept = value <= current;
      if (!accept && cfg.temperature > 0.0) accept = unif(rng) < std::exp(-(value - current) / cfg.temperature);
      if (accept) {
        res.x = y;
        current = value;
      }
      res.trace.push_back({restart, stage, delta, step, current, accept});
      step = std::max(cfg.min_step, step * cfg.step_decay);
    }
  }
  res.discrete = objective_discrete(varieties, emb, res.x, cfg.sampling);
  return res;
}

std::size_t max_dimension(std::span<const VarietySpec> varieties) {
  std::size_t k = 0;
  for (const auto& v : varieties) k = std::max(k, v.k);
  return k;
}

void finish_report(PartitionReport& rep, const Embedding& emb) {
  rep.n = emb.n();
  rep.s = emb.s();
  rep.degrees = emb.degrees();
  rep.total_degree = emb.total_degree();
  rep.pvec = emb.to_polys(rep.x);
  rep.spectrum = wht(rep.counts);
  rep.max_count = rep.counts.max();
  rep.objective = objective_discrete(rep.counts);
  rep.bound_ratio = bound_ratio(rep.max_count, rep.total_degree, rep.n, rep.k, rep.num_objects);
}

}  // namespace

PartitionReport partition_varieties(std::span<const VarietySpec> varieties, const SolveConfig& cfg) {
  check_config(cfg);
  for (const auto& v : varieties)
    if (v.n != cfg.n) throw DimensionMismatch("partition_varieties: variety lives in a different dimension");
  const Embedding emb(cfg.n, cfg.s);

  PartitionReport rep;
  rep.k = max_dimension(varieties);
  rep.num_objects = varieties.size();
  if (varieties.empty()) {
    rep.x = random_point(cfg.s, substream(cfg.seed, "start", 0));
    rep.counts = CellCounts(cfg.s);
    finish_report(rep, emb);
    return rep;
  }

  const auto results = run_parallel<RestartResult>(cfg.restarts, cfg.threads,
                                                   [&](std::size_t r) { return run_restart(varieties, emb, cfg, r); });
  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r)
    if (results[r].discrete < results[best].discrete) best = r;
  for (const auto& r : results) rep.trace.insert(rep.trace.end(), r.trace.begin(), r.trace.end());
  rep.best_restart = best;
  rep.x = results[best].x;
  rep.counts = counts(varieties, emb.to_polys(rep.x), cfg.sampling);
  finish_report(rep, emb);
  return rep;
}

namespace {

struct Split {
  std::int64_t max_imbalance = 0;
  std::int64_t total_imbalance = 0;
  friend bool operator<(const Split& a, const Split& b) {
    return std::tie(a.max_imbalance, a.total_imbalance) < std::tie(b.max_imbalance, b.total_imbalance);
  }
};

// Feature rows of one bisection step, grouped by current part.
struct StepData {
  std::vector<Eigen::MatrixXd> parts;
};

Split evaluate_split(const StepData& data, const Eigen::VectorXd& c) {
  Split out;
  for (const auto& part : data.parts) {
    const Eigen::VectorXd values = part * c;
    std::int64_t balance = 0;
    for (Eigen::Index i = 0; i < values.size(); ++i) balance += values(i) > 0 ? 1 : -1;
    out.max_imbalance = std::max(out.max_imbalance, std::abs(balance));
    out.total_imbalance += std::abs(balance);
  }
  return out;
}

// Damped Gauss-Newton on the smoothed balances sum_x tanh(c . phi(x) / sigma),
// with sigma annealed and c kept on the unit sphere.
Eigen::VectorXd bisect_search(const StepData& data, Eigen::VectorXd c, Rng& rng, Split& best_split) {
  const Eigen::Index m = c.size();
  Eigen::VectorXd best = c;
  best_split = evaluate_split(data, c);
  double scale = 0.0;
  std::size_t rows = 0;
  for (const auto& part : data.parts) {
    scale += (part * c).cwiseAbs().sum();
    rows += static_cast<std::size_t>(part.rows());
  }
  scale = rows ? scale / static_cast<double>(rows) : 1.0;
  if (!(scale > 0.0)) scale = 1.0;

  for (double sigma = scale; sigma > scale * 1e-3; sigma *= 0.5) {
    double mu = 1e-3;
    for (int it = 0; it < 25; ++it) {
      Eigen::MatrixXd jt_j = Eigen::MatrixXd::Zero(m, m);
      Eigen::VectorXd jt_r = Eigen::VectorXd::Zero(m);
      double cost = 0.0;
      for (const auto& part : data.parts) {
        const Eigen::ArrayXd z = (part * c).array() / sigma;
        const Eigen::ArrayXd th = z.tanh();
        const double r = th.sum();
        const Eigen::VectorXd grad = part.transpose() * ((1.0 - th * th) / sigma).matrix();
        jt_j += grad * grad.transpose();
        jt_r += grad * r;
        cost += r * r;
      }
      const Eigen::MatrixXd lhs = jt_j + mu * (jt_j.diagonal().maxCoeff() + 1e-12) * Eigen::MatrixXd::Identity(m, m);
      const Eigen::VectorXd dc = lhs.ldlt().solve(-jt_r);
      if (!dc.allFinite()) break;
      const Eigen::VectorXd trial = (c + dc).normalized();
      double trial_cost = 0.0;
      for (const auto& part : data.parts) {
        const double r = ((part * trial).array() / sigma).tanh().sum();
        trial_cost += r * r;
      }
      if (trial_cost < cost) {
        c = trial;
        mu = std::max(1e-9, mu * 0.3);
        const Split split = evaluate_split(data, c);
        if (split < best_split) {
          best_split = split;
          best = c;
        }
        if (dc.norm() < 1e-10) break;
      } else {
        mu *= 10.0;
        if (mu > 1e8) break;
      }
    }
  }

  // Discrete polish: small random moves that do not worsen the split.
  std::normal_distribution<double> normal;
  double step = 1e-2;
  c = best;
  for (int it = 0; it < 300 && best_split.max_imbalance > 1; ++it) {
    Eigen::VectorXd trial = c;
    for (Eigen::Index i = 0; i < m; ++i) trial(i) += step * normal(rng);
    trial.normalize();
    const Split split = evaluate_split(data, trial);
    if (!(best_split < split)) {
      c = trial;
      if (split < best_split) {
        best_split = split;
        best = trial;
      }
    } else {
      step = std::max(1e-6, step * 0.97);
    }
  }
  return best;
}

}  // namespace

PartitionReport partition_points(std::span<const Point> points, const SolveConfig& cfg) {
  check_config(cfg);
  for (const auto& p : points)
    if (p.size() != cfg.n) throw DimensionMismatch("partition_points: point has the wrong dimension");
  const Embedding emb(cfg.n, cfg.s);
  const double tau = cfg.sampling.tau;

  PartitionReport rep;
  rep.k = 0;
  rep.num_objects = points.size();
  std::vector<std::vector<double>> blocks;
  std::vector<Polynomial> chosen;
  // part[i] is the cell index of point i so far, or -1 once it hits a zero set.
  std::vector<std::int64_t> part(points.size(), 0);

  for (std::size_t j = 0; j < cfg.s; ++j) {
    const std::size_t m = block_size(j);
    const std::size_t num_parts = std::size_t{1} << j;
    const auto& basis = *emb.bases()[j];
    std::vector<std::vector<std::size_t>> members(num_parts);
    for (std::size_t i = 0; i < points.size(); ++i)
      if (part[i] >= 0) members[static_cast<std::size_t>(part[i])].push_back(i);
    StepData data;
    std::vector<double> phi(m);
    for (const auto& mem : members) {
      if (mem.empty()) continue;
      Eigen::MatrixXd rows(static_cast<Eigen::Index>(mem.size()), static_cast<Eigen::Index>(m));
      for (std::size_t r = 0; r < mem.size(); ++r) {
        basis.evaluate_monomials(points[mem[r]], phi);
        for (std::size_t c = 0; c < m; ++c) rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = phi[c];
      }
      data.parts.push_back(std::move(rows));
    }

    Rng rng(substream(cfg.seed, "bisect", j));
    Eigen::VectorXd best;
    Split best_split{std::numeric_limits<std::int64_t>::max(), 0};
    for (std::size_t r = 0; r < cfg.restarts; ++r) {
      const auto start = uniform_on_sphere(rng, m);
      Split split;
      const Eigen::VectorXd c =
          bisect_search(data, Eigen::Map<const Eigen::VectorXd>(start.data(), static_cast<Eigen::Index>(m)), rng, split);
      if (split < best_split) {
        best_split = split;
        best = c;
      }
      if (best_split.max_imbalance == 0) break;
    }
    const Eigen::VectorXd unit = best.normalized();
    blocks.emplace_back(unit.data(), unit.data() + unit.size());
    std::vector<double> coeffs(basis.size(), 0.0);
    std::copy(blocks.back().begin(), blocks.back().end(), coeffs.begin());
    chosen.emplace_back(emb.bases()[j], std::move(coeffs));

    BisectionStep trace{j, 0, 0, 0, 0.0};
    std::vector<std::int64_t> pos(num_parts, 0), neg(num_parts, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (part[i] < 0) continue;
      const double value = chosen.back()(points[i]);
      if (std::abs(value) <= tau) {
        part[i] = -1;
        continue;
      }
      if (value > 0) {
        ++pos[static_cast<std::size_t>(part[i])];
      } else {
        ++neg[static_cast<std::size_t>(part[i])];
        part[i] += std::int64_t{1} << j;
      }
    }
    for (std::size_t p = 0; p < num_parts; ++p) {
      const std::int64_t q = pos[p] + neg[p];
      if (q == 0) continue;
      ++trace.parts;
      const std::int64_t slack = std::max(pos[p], neg[p]) - (q + 1) / 2;
      trace.max_imbalance = std::max(trace.max_imbalance, std::abs(pos[p] - neg[p]));
      trace.max_slack = std::max(trace.max_slack, slack);
      trace.max_relative_slack =
          std::max(trace.max_relative_slack, static_cast<double>(slack) / std::sqrt(static_cast<double>(q)));
    }
    rep.bisection.push_back(trace);
  }

  rep.x = XsPoint(blocks);
  rep.counts = point_counts(points, emb.to_polys(rep.x), tau);
  finish_report(rep, emb);
  return rep;
}

}  // namespace ppart
