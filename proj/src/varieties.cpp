#include "ppart/varieties.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ppart/error.hpp"
#include "ppart/rng.hpp"
#include "vec.hpp"

namespace ppart {

using detail::axpy;
using detail::dot;
using detail::norm;

namespace {

void require_dim(std::span<const double> v, std::size_t n, const char* what) {
  if (v.size() != n) {
    std::ostringstream msg;
    msg << what << ": expected " << n << " coordinates, got " << v.size();
    throw DimensionMismatch(msg.str());
  }
}

// Gram-Schmidt; throws if the vectors are (numerically) dependent.
std::vector<Point> orthonormalize(std::vector<Point> frame, const char* what) {
  for (std::size_t i = 0; i < frame.size(); ++i) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t j = 0; j < i; ++j) axpy(-dot(frame[i], frame[j]), frame[j], frame[i]);
    const double len = norm(frame[i]);
    if (!(len > 1e-12)) throw InvalidArgument(std::string(what) + ": frame vectors are degenerate");
    for (auto& c : frame[i]) c /= len;
  }
  return frame;
}

Polynomial linear_equation(std::span<const double> normal, std::span<const double> through) {
  const std::size_t n = normal.size();
  std::vector<double> coeffs(n + 1);
  coeffs[0] = -dot(normal, through);
  for (std::size_t i = 0; i < n; ++i) coeffs[i + 1] = normal[i];
  return Polynomial(make_basis(n, 1), std::move(coeffs));
}

struct BallSlice {
  Point center;  // foot of the perpendicular from the origin
  double half_width = 0.0;
};

// Intersection of the affine flat base + span(frame) with B_R.
std::optional<BallSlice> flat_slice(const Point& base, std::span<const Point> frame, double radius) {
  Point p0 = base;
  for (const auto& f : frame) axpy(-dot(base, f), f, p0);
  const double d2 = dot(p0, p0);
  if (d2 > radius * radius) return std::nullopt;
  return BallSlice{std::move(p0), std::sqrt(std::max(0.0, radius * radius - d2))};
}

struct Arc {
  double start = 0.0;
  double length = 0.0;
};

// Angles theta with |center + r(cos e0 + sin e1)| <= R.
std::optional<Arc> circle_arc(const CircleSampler& c, double radius) {
  const double c0 = dot(c.center, c.frame[0]);
  const double c1 = dot(c.center, c.frame[1]);
  const double k = radius * radius - dot(c.center, c.center) - c.radius * c.radius;
  const double rho = c.radius * std::hypot(c0, c1);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (rho < 1e-300) {
    if (k >= 0) return Arc{0.0, two_pi};
    return std::nullopt;
  }
  const double q = k / (2.0 * rho);
  if (q >= 1.0) return Arc{0.0, two_pi};
  if (q < -1.0) return std::nullopt;
  const double phi = std::atan2(c1, c0);
  const double a = std::acos(q);
  return Arc{phi + a, two_pi - 2.0 * a};
}

Point circle_point(const CircleSampler& c, double theta) {
  Point x = c.center;
  axpy(c.radius * std::cos(theta), c.frame[0], x);
  axpy(c.radius * std::sin(theta), c.frame[1], x);
  return x;
}

// Stratified jittered parameters in [lo, lo + len).
std::vector<double> stratified(Rng& rng, double lo, double len, std::size_t count) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> t(count);
  const double step = len / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) t[i] = lo + (static_cast<double>(i) + unif(rng)) * step;
  return t;
}

std::vector<Point> flat_points(const FlatSampler& f, const BallSlice& slice, std::size_t count,
                               Rng& rng) {
  const std::size_t k = f.frame.size();
  std::vector<Point> out;
  if (k == 0) {
    out.push_back(f.base);
    return out;
  }
  out.reserve(count);
  if (k == 1) {
    for (double t : stratified(rng, -slice.half_width, 2.0 * slice.half_width, count)) {
      Point x = slice.center;
      axpy(t, f.frame[0], x);
      out.push_back(std::move(x));
    }
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    auto y = uniform_in_ball(rng, k, slice.half_width);
    Point x = slice.center;
    for (std::size_t a = 0; a < k; ++a) axpy(y[a], f.frame[a], x);
    out.push_back(std::move(x));
  }
  return out;
}

FlatSampler as_flat(const LineSampler& l) { return FlatSampler{l.base, {l.direction}}; }

struct Anchors {
  std::vector<Point> points;
  double k_volume = 0.0;
};

Anchors anchors_in_ball(const VarietySpec& gamma, double radius, std::size_t count, Rng& rng) {
  if (!gamma.sampler) throw UnsupportedVariety("variety has no parametric sampler");
  Anchors out;
  if (const auto* c = std::get_if<CircleSampler>(&*gamma.sampler)) {
    auto arc = circle_arc(*c, radius);
    if (!arc) return out;
    for (double th : stratified(rng, arc->start, arc->length, count))
      out.points.push_back(circle_point(*c, th));
    out.k_volume = c->radius * arc->length;
    return out;
  }
  const FlatSampler flat = std::holds_alternative<LineSampler>(*gamma.sampler)
                               ? as_flat(std::get<LineSampler>(*gamma.sampler))
                               : std::get<FlatSampler>(*gamma.sampler);
  auto slice = flat_slice(flat.base, flat.frame, radius);
  if (!slice) return out;
  out.points = flat_points(flat, *slice, count, rng);
  const std::size_t k = flat.frame.size();
  out.k_volume = k == 0 ? 1.0 : unit_ball_volume(k) * std::pow(slice->half_width, static_cast<double>(k));
  return out;
}

}  // namespace

std::vector<Point> orthogonal_complement(std::span<const Point> frame, std::size_t n) {
  std::vector<Point> basis(frame.begin(), frame.end());
  std::vector<Point> out;
  std::vector<bool> used(n, false);
  while (basis.size() < n) {
    Point best;
    double best_len = -1.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      Point e(n, 0.0);
      e[i] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) axpy(-dot(e, b), b, e);
      const double len = norm(e);
      if (len > best_len + 1e-12) {
        best_len = len;
        best = std::move(e);
        best_i = i;
      }
    }
    used[best_i] = true;
    for (auto& c : best) c /= best_len;
    basis.push_back(best);
    out.push_back(std::move(best));
  }
  return out;
}

double VarietySpec::residual(std::span<const double> x) const {
  double r = 0.0;
  for (const auto& p : defining) r = std::max(r, std::abs(p(x)));
  return r;
}

std::optional<LineSampler> VarietySpec::as_line() const {
  if (!sampler) return std::nullopt;
  if (const auto* l = std::get_if<LineSampler>(&*sampler)) return *l;
  if (const auto* f = std::get_if<FlatSampler>(&*sampler); f && f->frame.size() == 1)
    return LineSampler{f->base, f->frame[0]};
  return std::nullopt;
}

VarietySpec make_line(Point base, Point direction) {
  const std::size_t n = base.size();
  require_dim(direction, n, "line direction");
  if (n < 2) throw InvalidArgument("line: ambient dimension must exceed 1");
  auto frame = orthonormalize({std::move(direction)}, "line");
  VarietySpec v;
  v.n = n;
  v.k = 1;
  for (const auto& nu : orthogonal_complement(frame, n)) v.defining.push_back(linear_equation(nu, base));
  v.sampler = LineSampler{std::move(base), std::move(frame[0])};
  return v;
}

VarietySpec make_circle(Point center, double radius, std::optional<std::array<Point, 2>> frame) {
  const std::size_t n = center.size();
  if (n < 2) throw InvalidArgument("circle: ambient dimension must be >= 2");
  if (!(radius > 0) || !std::isfinite(radius)) throw InvalidArgument("circle: radius must be positive");
  if (!frame) {
    if (n != 2) throw InvalidArgument("circle: frame is required outside R^2");
    frame = std::array<Point, 2>{Point{1.0, 0.0}, Point{0.0, 1.0}};
  }
  require_dim((*frame)[0], n, "circle frame");
  require_dim((*frame)[1], n, "circle frame");
  auto ortho = orthonormalize({(*frame)[0], (*frame)[1]}, "circle");

  VarietySpec v;
  v.n = n;
  v.k = 1;
  std::vector<std::pair<std::vector<unsigned>, double>> terms;
  double c2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<unsigned> e(n, 0);
    e[i] = 2;
    terms.emplace_back(e, 1.0);
    e[i] = 1;
    terms.emplace_back(e, -2.0 * center[i]);
    c2 += center[i] * center[i];
  }
  terms.emplace_back(std::vector<unsigned>(n, 0), c2 - radius * radius);
  v.defining.push_back(Polynomial::from_terms(n, terms));
  for (const auto& nu : orthogonal_complement(ortho, n)) v.defining.push_back(linear_equation(nu, center));
  v.sampler = CircleSampler{std::move(center), radius, {std::move(ortho[0]), std::move(ortho[1])}};
  return v;
}

VarietySpec make_flat(Point base, std::vector<Point> frame) {
  const std::size_t n = base.size();
  if (frame.size() >= n) throw InvalidArgument("k-plane: k must be smaller than n");
  for (const auto& f : frame) require_dim(f, n, "k-plane frame");
  frame = orthonormalize(std::move(frame), "k-plane");
  VarietySpec v;
  v.n = n;
  v.k = frame.size();
  for (const auto& nu : orthogonal_complement(frame, n)) v.defining.push_back(linear_equation(nu, base));
  v.sampler = FlatSampler{std::move(base), std::move(frame)};
  return v;
}

VarietySpec make_point(Point p) {
  if (p.empty()) throw InvalidArgument("point: empty coordinates");
  return make_flat(std::move(p), {});
}

VarietySpec make_implicit(std::size_t n, std::size_t k, std::vector<Polynomial> polys) {
  if (k >= n) throw InvalidArgument("implicit variety: k must be smaller than n");
  if (polys.empty()) throw InvalidArgument("implicit variety: no defining polynomials");
  for (const auto& p : polys) {
    if (p.dimension() != n) throw DimensionMismatch("implicit variety: polynomial dimension mismatch");
    if (p.coeff_norm() == 0.0) throw InvalidArgument("implicit variety: zero polynomial");
  }
  VarietySpec v;
  v.n = n;
  v.k = k;
  v.defining = std::move(polys);
  return v;
}

std::vector<Point> sample_in_ball(const VarietySpec& gamma, double radius, std::size_t count,
                                  std::uint64_t seed) {
  if (count < 1) throw InvalidArgument("sample_in_ball: count must be >= 1");
  Rng rng(seed);
  return anchors_in_ball(gamma, radius, count, rng).points;
}

WeightedCloud tube_sample(const VarietySpec& gamma, double delta, double radius, std::size_t count,
                          std::uint64_t seed) {
  if (!(delta > 0)) throw InvalidArgument("tube_sample: delta must be positive");
  if (count < 1) throw InvalidArgument("tube_sample: count must be >= 1");
  Rng rng(seed);
  Anchors anchors = anchors_in_ball(gamma, radius + delta, count, rng);
  WeightedCloud cloud;
  if (anchors.points.empty()) return cloud;
  if (gamma.k == 0) anchors.points.assign(count, anchors.points.front());

  const std::size_t n = gamma.n;
  const std::size_t m = n - gamma.k;
  // The normal space is constant along flats; circles add the radial direction.
  std::vector<Point> fixed_normals;
  const CircleSampler* circle = std::get_if<CircleSampler>(&*gamma.sampler);
  if (circle) {
    fixed_normals = orthogonal_complement(circle->frame, n);
  } else if (auto line = gamma.as_line()) {
    fixed_normals = orthogonal_complement(std::span<const Point>(&line->direction, 1), n);
  } else {
    fixed_normals = orthogonal_complement(std::get<FlatSampler>(*gamma.sampler).frame, n);
  }

  cloud.weight = anchors.k_volume * unit_ball_volume(m) * std::pow(delta, static_cast<double>(m)) /
                 static_cast<double>(anchors.points.size());
  cloud.points.reserve(anchors.points.size());
  cloud.anchors.reserve(anchors.points.size());
  const double r2 = radius * radius;
  for (auto& a : anchors.points) {
    auto y = uniform_in_ball(rng, m, delta);
    Point x = a;
    std::size_t offset = 0;
    if (circle) {
      Point radial(n);
      for (std::size_t i = 0; i < n; ++i) radial[i] = (a[i] - circle->center[i]) / circle->radius;
      axpy(y[0], radial, x);
      offset = 1;
    }
    for (std::size_t i = 0; i < fixed_normals.size(); ++i) axpy(y[offset + i], fixed_normals[i], x);
    if (dot(x, x) > r2) continue;
    cloud.points.push_back(std::move(x));
    cloud.anchors.push_back(std::move(a));
  }
  return cloud;
}

}  // namespace ppart
