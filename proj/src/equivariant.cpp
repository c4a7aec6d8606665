#include "ppart/equivariant.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>

#include "ppart/error.hpp"
#include "ppart/rng.hpp"

namespace ppart {

std::size_t top_factor(SignVector v) {
  if (v.bits == 0) throw InvalidArgument("top_factor: v must be nonzero");
  return static_cast<std::size_t>(std::bit_width(v.bits)) - 1;
}

CoordRef x_coord(SignVector v) {
  const std::size_t j = top_factor(v);
  return {j, 1 + (v.bits & ((1U << j) - 1U))};
}

EquivariantMap::EquivariantMap(std::size_t s, std::function<MapValues(const XsPoint&)> eval, Kind kind,
                               double lambda)
    : s_(s), eval_(std::move(eval)), kind_(kind), lambda_(lambda) {
  if (s < 1 || s > kMaxFactors) throw InvalidArgument("EquivariantMap: need 1 <= s <= 20");
}

MapValues model_g(const XsPoint& x) {
  const std::size_t s = x.s();
  MapValues out((std::size_t{1} << s) - 1);
  for (std::uint32_t v = 1; v < (1U << s); ++v) {
    const SignVector sv{v};
    const auto c = x_coord(sv);
    double val = x.block(c.block)[c.index];
    for (std::size_t j = 0; j < c.block; ++j)
      if (sv[j]) val *= x.block(j)[0];
    out[v - 1] = val;
  }
  return out;
}

EquivariantMap model_map(std::size_t s) { return EquivariantMap(s, model_g, EquivariantMap::Kind::model, 0.0); }

std::vector<XsPoint> g_zeros(std::size_t s) {
  if (s < 1 || s > 10) throw InvalidArgument("g_zeros: need 1 <= s <= 10");
  std::vector<XsPoint> zeros;
  zeros.reserve(std::size_t{1} << s);
  for (std::uint32_t b = 0; b < (1U << s); ++b) {
    std::vector<std::vector<double>> blocks;
    for (std::size_t j = 0; j < s; ++j) {
      std::vector<double> blk(block_size(j), 0.0);
      blk[0] = ((b >> j) & 1U) ? -1.0 : 1.0;
      blocks.push_back(std::move(blk));
    }
    zeros.emplace_back(std::move(blocks));
  }
  return zeros;
}

Eigen::MatrixXd jacobian_g(const XsPoint& x) {
  const std::size_t s = x.s();
  for (std::size_t j = 0; j < s; ++j) {
    auto b = x.block(j);
    for (std::size_t i = 1; i < b.size(); ++i)
      if (std::abs(b[i]) > 1e-12) throw InvalidArgument("jacobian_g: point is not a zero of g");
  }
  const std::size_t m = (std::size_t{1} << s) - 1;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::uint32_t v = 1; v <= m; ++v) {
    const SignVector sv{v};
    double d = 1.0;
    for (std::size_t j = 0; j < top_factor(sv); ++j)
      if (sv[j]) d *= x.block(j)[0];
    jac(v - 1, v - 1) = d;
  }
  return jac;
}

double check_equivariance(const EquivariantMap& f, std::size_t trials, std::uint64_t seed) {
  double worst = 0.0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const XsPoint x = random_point(f.s(), substream(seed, "equivariance", trial));
    const MapValues base = f(x);
    for (std::size_t j = 0; j < f.s(); ++j) {
      const MapValues flipped = f(flip(x, j));
      for (std::uint32_t v = 1; v <= base.size(); ++v) {
        const double sign = SignVector{v}[j] ? -1.0 : 1.0;
        worst = std::max(worst, std::abs(flipped[v - 1] - sign * base[v - 1]));
      }
    }
  }
  return worst;
}

namespace {

struct OddTerm {
  std::vector<std::vector<double>> functionals;  // one per factor j with v_j = 1, else empty
  std::vector<double> even;                      // coefficient of t_j^2 in the even factor
};

// h_v = sum over terms of prod_{j in v} <a_j, x_j> * (1 + sum_j b_j t_j^2).
std::function<MapValues(const XsPoint&)> odd_products(std::size_t s, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  constexpr std::size_t kTerms = 2;
  auto terms = std::make_shared<std::vector<std::vector<OddTerm>>>((std::size_t{1} << s) - 1);
  for (std::uint32_t v = 1; v < (1U << s); ++v) {
    for (std::size_t k = 0; k < kTerms; ++k) {
      OddTerm term;
      term.functionals.resize(s);
      term.even.resize(s);
      for (std::size_t j = 0; j < s; ++j) {
        if ((v >> j) & 1U) term.functionals[j] = uniform_on_sphere(rng, block_size(j));
        term.even[j] = unif(rng);
      }
      (*terms)[v - 1].push_back(std::move(term));
    }
  }
  return [terms, s](const XsPoint& x) {
    MapValues out(terms->size(), 0.0);
    for (std::size_t idx = 0; idx < terms->size(); ++idx) {
      for (const auto& term : (*terms)[idx]) {
        double prod = 1.0;
        double even = 1.0;
        for (std::size_t j = 0; j < s; ++j) {
          const auto b = x.block(j);
          even += term.even[j] * b[0] * b[0];
          if (term.functionals[j].empty()) continue;
          double dotp = 0.0;
          for (std::size_t i = 0; i < b.size(); ++i) dotp += term.functionals[j][i] * b[i];
          prod *= dotp;
        }
        out[idx] += prod * even;
      }
    }
    return out;
  };
}

}  // namespace

EquivariantMap random_equivariant(std::size_t s, double lambda, std::uint64_t seed) {
  auto h = odd_products(s, seed);
  return EquivariantMap(
      s,
      [h, lambda](const XsPoint& x) {
        MapValues out = model_g(x);
        if (lambda == 0.0) return out;
        const MapValues pert = h(x);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += lambda * pert[i];
        return out;
      },
      EquivariantMap::Kind::perturbed, lambda);
}

XsPoint hemisphere_fold(const XsPoint& x) {
  XsPoint out = x;
  for (std::size_t j = 0; j < x.s(); ++j) {
    const double t = x.block(j)[0];
    if (std::abs(t) < 1e-12) throw BoundaryPoint("hemisphere_fold: t_j is zero on some factor");
    if (t < 0) out = flip(out, j);
  }
  return out;
}

double residual_norm(const EquivariantMap& f, const XsPoint& x) {
  double r = 0.0;
  for (double v : f(x)) r = std::max(r, std::abs(v));
  return r;
}

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Homotopy H(x, t) = (1-t) g + t f + t(1-t) bend k, evaluated on the
// retraction of ambient block coordinates, followed by |x_j|^2 - 1.
class Homotopy {
 public:
  Homotopy(const EquivariantMap& f, std::function<MapValues(const XsPoint&)> bend_map, double bend)
      : f_(f), bend_map_(std::move(bend_map)), bend_(bend), s_(f.s()) {
    for (std::size_t j = 0; j < s_; ++j) {
      offsets_.push_back(ambient_);
      ambient_ += block_size(j);
    }
    equations_ = ((std::size_t{1} << s_) - 1) + s_;
  }

  Index ambient() const { return static_cast<Index>(ambient_); }

  std::vector<std::vector<double>> blocks(const VectorXd& x) const {
    std::vector<std::vector<double>> out(s_);
    for (std::size_t j = 0; j < s_; ++j)
      out[j].assign(x.data() + offsets_[j], x.data() + offsets_[j] + block_size(j));
    return out;
  }

  XsPoint point(const VectorXd& x) const { return retract(blocks(x)); }

  // Returns H and, through out-params, the map parts needed for dH/dt.
  VectorXd eval(const VectorXd& x, double t, VectorXd* dt = nullptr) const {
    const XsPoint p = point(x);
    const MapValues g = model_g(p);
    const MapValues fv = f_(p);
    MapValues k;
    if (bend_map_) k = bend_map_(p);
    const std::size_t m = g.size();
    VectorXd h(static_cast<Index>(equations_));
    if (dt) dt->setZero(static_cast<Index>(equations_));
    for (std::size_t i = 0; i < m; ++i) {
      double val = (1.0 - t) * g[i] + t * fv[i];
      double dval = fv[i] - g[i];
      if (bend_map_) {
        val += bend_ * t * (1.0 - t) * k[i];
        dval += bend_ * (1.0 - 2.0 * t) * k[i];
      }
      h(static_cast<Index>(i)) = val;
      if (dt) (*dt)(static_cast<Index>(i)) = dval;
    }
    for (std::size_t j = 0; j < s_; ++j) {
      double n2 = 0.0;
      for (std::size_t i = 0; i < block_size(j); ++i) n2 += x(static_cast<Index>(offsets_[j] + i)) * x(static_cast<Index>(offsets_[j] + i));
      h(static_cast<Index>(m + j)) = n2 - 1.0;
    }
    return h;
  }

  // Jacobian with respect to (x, t); the x part by central differences.
  MatrixXd jacobian(const VectorXd& x, double t) const {
    MatrixXd jac(static_cast<Index>(equations_), static_cast<Index>(ambient_) + 1);
    VectorXd dt;
    eval(x, t, &dt);
    const double step = 1e-7;
    VectorXd xp = x;
    for (Index c = 0; c < static_cast<Index>(ambient_); ++c) {
      const double keep = xp(c);
      xp(c) = keep + step;
      const VectorXd hp = eval(xp, t);
      xp(c) = keep - step;
      const VectorXd hm = eval(xp, t);
      xp(c) = keep;
      jac.col(c) = (hp - hm) / (2.0 * step);
    }
    jac.col(static_cast<Index>(ambient_)) = dt;
    return jac;
  }

 private:
  const EquivariantMap& f_;
  std::function<MapValues(const XsPoint&)> bend_map_;
  double bend_;
  std::size_t s_;
  std::size_t ambient_ = 0;
  std::size_t equations_ = 0;
  std::vector<std::size_t> offsets_;
};

std::optional<VectorXd> tangent(const MatrixXd& jac, const VectorXd& previous) {
  const Index n = jac.cols();
  MatrixXd a(n, n);
  a.topRows(n - 1) = jac;
  a.row(n - 1) = previous.transpose();
  Eigen::FullPivLU<MatrixXd> lu(a);
  if (lu.rank() < n) return std::nullopt;
  VectorXd rhs = VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  VectorXd tau = lu.solve(rhs);
  if (!tau.allFinite()) return std::nullopt;
  return tau.normalized();
}

VectorXd flat_vector(const XsPoint& p) {
  const auto f = p.flat();
  return Eigen::Map<const VectorXd>(f.data(), static_cast<Index>(f.size()));
}

// Newton at fixed t = 1 on the square system in x.
VectorXd endgame(const Homotopy& hom, VectorXd x) {
  for (int it = 0; it < 20; ++it) {
    const VectorXd h = hom.eval(x, 1.0);
    if (h.lpNorm<Eigen::Infinity>() < 1e-14) break;
    const MatrixXd jac = hom.jacobian(x, 1.0).leftCols(hom.ambient());
    Eigen::FullPivLU<MatrixXd> lu(jac);
    if (lu.rank() < jac.cols()) break;
    const VectorXd dx = lu.solve(-h);
    if (!dx.allFinite()) break;
    x += dx;
    if (dx.lpNorm<Eigen::Infinity>() < 1e-15) break;
  }
  return x;
}

ContinuationAttempt track(const Homotopy& hom, const XsPoint& start, const ContinuationConfig& cfg,
                          VectorXd& result) {
  ContinuationAttempt attempt;
  const Index n = hom.ambient() + 1;
  VectorXd z(n);
  z.head(hom.ambient()) = flat_vector(start);
  z(n - 1) = 0.0;
  VectorXd tau_prev = VectorXd::Zero(n);
  tau_prev(n - 1) = 1.0;
  auto tau0 = tangent(hom.jacobian(z.head(n - 1), 0.0), tau_prev);
  if (!tau0) return attempt;
  VectorXd tau = *tau0;
  if (tau(n - 1) < 0) tau = -tau;

  double h = cfg.initial_step;
  for (std::size_t step = 0; step < cfg.max_steps; ++step) {
    const VectorXd predicted = z + h * tau;
    VectorXd w = predicted;
    bool converged = false;
    for (int it = 0; it < 8; ++it) {
      const VectorXd hv = hom.eval(w.head(n - 1), w(n - 1));
      MatrixXd a(n, n);
      a.topRows(n - 1) = hom.jacobian(w.head(n - 1), w(n - 1));
      a.row(n - 1) = tau.transpose();
      VectorXd rhs(n);
      rhs.head(n - 1) = -hv;
      rhs(n - 1) = -tau.dot(w - predicted);
      Eigen::FullPivLU<MatrixXd> lu(a);
      if (lu.rank() < n) break;
      const VectorXd dw = lu.solve(rhs);
      if (!dw.allFinite()) break;
      w += dw;
      if (dw.norm() < 1e-11 && hom.eval(w.head(n - 1), w(n - 1)).lpNorm<Eigen::Infinity>() < 1e-10) {
        converged = true;
        break;
      }
    }
    std::optional<VectorXd> tau_new;
    if (converged && (w - z).norm() <= 2.0 * h) tau_new = tangent(hom.jacobian(w.head(n - 1), w(n - 1)), tau);
    if (!tau_new || tau_new->dot(tau) < 0.9) {
      h *= 0.5;
      if (h < cfg.min_step) return attempt;
      continue;
    }
    if (w(n - 1) >= 1.0) {
      const double frac = (1.0 - z(n - 1)) / (w(n - 1) - z(n - 1));
      VectorXd x = z.head(n - 1) + frac * (w.head(n - 1) - z.head(n - 1));
      result = endgame(hom, x);
      attempt.t_reached = 1.0;
      return attempt;
    }
    if (w(n - 1) < -1e-3) {
      attempt.t_reached = z(n - 1);
      return attempt;
    }
    z = w;
    tau = *tau_new;
    attempt.t_reached = std::max(attempt.t_reached, z(n - 1));
    h = std::min(cfg.max_step, h * 1.5);
  }
  return attempt;
}

}  // namespace

ContinuationResult continuation_zero(const EquivariantMap& f, const ContinuationConfig& cfg) {
  const std::size_t s = f.s();
  const auto starts = g_zeros(s);
  ContinuationResult result;

  auto record = [&](const XsPoint& zero, double residual) {
    XsPoint rep = zero;
    try {
      rep = hemisphere_fold(zero);
    } catch (const BoundaryPoint&) {
    }
    const bool seen = std::any_of(result.orbits.begin(), result.orbits.end(), [&](const XsPoint& o) {
      const auto a = o.flat(), b = rep.flat();
      for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-6) return false;
      return true;
    });
    if (!seen) result.orbits.push_back(rep);
    if (!result.zero || residual < result.residual) {
      result.zero = zero;
      result.residual = residual;
    }
  };

  for (std::size_t a = 0; a < cfg.max_attempts; ++a) {
    const std::size_t start = a % starts.size();
    const bool bent = a > 0;
    ContinuationAttempt attempt;
    attempt.start = start;
    attempt.bent = bent;

    if (!bent && residual_norm(f, starts[start]) == 0.0) {
      attempt.success = true;
      attempt.t_reached = 1.0;
      result.attempts.push_back(attempt);
      record(starts[start], 0.0);
      if (!cfg.exhaustive) break;
      continue;
    }

    std::function<MapValues(const XsPoint&)> bend_map;
    if (bent) {
      auto k = random_equivariant(s, 1.0, substream(cfg.seed, "bend", a));
      bend_map = [k](const XsPoint& x) {
        MapValues v = k(x);
        const MapValues g = model_g(x);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= g[i];
        return v;
      };
    }
    Homotopy hom(f, bend_map, cfg.bend);
    VectorXd x;
    ContinuationAttempt tracked = track(hom, starts[start], cfg, x);
    attempt.t_reached = tracked.t_reached;
    if (tracked.t_reached >= 1.0) {
      const XsPoint zero = hom.point(x);
      attempt.residual = residual_norm(f, zero);
      attempt.success = attempt.residual < cfg.success_tol;
      if (attempt.success) record(zero, attempt.residual);
    }
    result.attempts.push_back(attempt);
    if (attempt.success && !cfg.exhaustive) break;
  }

  if (result.zero) {
    for (std::uint32_t mask = 0; mask < (1U << s); ++mask) {
      XsPoint image = *result.zero;
      for (std::size_t j = 0; j < s; ++j)
        if ((mask >> j) & 1U) image = flip(image, j);
      result.orbit_residuals.push_back(residual_norm(f, image));
    }
  }
  return result;
}

}  // namespace ppart
