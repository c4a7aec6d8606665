#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ppart/cells.hpp"
#include "ppart/sphereprod.hpp"

namespace ppart {

/// Coordinate names on block j (0-based) of X_s: position 0 is t_j, and
/// position 1 + u holds x_v for v = u + 2^j (so that j(v) = j).
struct CoordRef {
  std::size_t block = 0;
  std::size_t index = 0;
};

/// j(v): 0-based index of the highest set bit of v != 0.
std::size_t top_factor(SignVector v);

/// Location of x_v.
CoordRef x_coord(SignVector v);

/// Values f_v for v = 1 .. 2^s - 1, stored at index v - 1.
using MapValues = std::vector<double>;

/// A map X_s -> R^(2^s - 1) expected to satisfy f_v(Fl_j x) = (-1)^(v_j) f_v(x).
class EquivariantMap {
 public:
  enum class Kind { model, perturbed, custom };

  EquivariantMap(std::size_t s, std::function<MapValues(const XsPoint&)> eval, Kind kind = Kind::custom,
                 double lambda = 0.0);

  std::size_t s() const { return s_; }
  Kind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  MapValues operator()(const XsPoint& x) const { return eval_(x); }

 private:
  std::size_t s_;
  std::function<MapValues(const XsPoint&)> eval_;
  Kind kind_;
  double lambda_;
};

/// g_v(x) = x_v * prod_{j : v_j = 1, j < j(v)} t_j.
MapValues model_g(const XsPoint& x);
EquivariantMap model_map(std::size_t s);

/// The 2^s zeros of g: t_j = +-1, x_v = 0. Bit j of the enumeration index
/// set means t_j = -1.
std::vector<XsPoint> g_zeros(std::size_t s);

/// dg at a zero, in the tangent coordinates x_v (rows and columns ordered by
/// v = 1 .. 2^s - 1). Diagonal with entries prod_{j : v_j = 1, j < j(v)} t_j.
/// Throws InvalidArgument when x is not a zero of g.
Eigen::MatrixXd jacobian_g(const XsPoint& x);

/// max |f_v(Fl_j x) - (-1)^(v_j) f_v(x)| over random x, every j and v.
double check_equivariance(const EquivariantMap& f, std::size_t trials, std::uint64_t seed);

/// f_v = g_v + lambda h_v where each h_v is a sum of products over {j : v_j = 1}
/// of odd linear functionals of block j, times a factor even in every t_j.
EquivariantMap random_equivariant(std::size_t s, double lambda, std::uint64_t seed);

/// The flip-orbit representative with every t_j > 0.
/// Throws BoundaryPoint if some |t_j| < 1e-12.
XsPoint hemisphere_fold(const XsPoint& x);

struct ContinuationConfig {
  double initial_step = 0.05;
  double min_step = 1e-7;
  double max_step = 0.2;
  std::size_t max_steps = 20000;
  double success_tol = 1e-8;
  /// Attempts after the straight homotopy use a bent path
  /// (1-t) g + t f + t(1-t) bend * k with k a random equivariant map.
  std::size_t max_attempts = 8;
  double bend = 0.5;
  /// Keep tracking after the first success and report every orbit found.
  bool exhaustive = false;
  std::uint64_t seed = 0;
};

struct ContinuationAttempt {
  std::size_t start = 0;
  bool bent = false;
  bool success = false;
  double t_reached = 0.0;
  double residual = 0.0;
};

struct ContinuationResult {
  std::optional<XsPoint> zero;
  double residual = 0.0;
  /// max_v |f_v| at each of the 2^s flip images of the zero.
  std::vector<double> orbit_residuals;
  std::vector<ContinuationAttempt> attempts;
  /// Hemisphere representatives of the distinct zero orbits reached.
  std::vector<XsPoint> orbits;

  bool success() const { return zero.has_value(); }
};

/// Tracks a zero of the homotopy from g to f by pseudo-arclength
/// predictor-corrector in ambient block coordinates with the unit-sphere
/// constraints appended, so paths can pass folds in t.
ContinuationResult continuation_zero(const EquivariantMap& f, const ContinuationConfig& cfg = {});

/// max_v |f_v(x)|.
double residual_norm(const EquivariantMap& f, const XsPoint& x);

}  // namespace ppart
