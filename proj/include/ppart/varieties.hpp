#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "ppart/polyalg.hpp"

namespace ppart {

/// x(t) = base + t * direction, |direction| = 1.
struct LineSampler {
  Point base;
  Point direction;
};

/// center + radius * (cos(theta) frame[0] + sin(theta) frame[1]).
struct CircleSampler {
  Point center;
  double radius = 1.0;
  std::array<Point, 2> frame;
};

/// Affine k-plane base + span(frame) with an orthonormal frame; k = 0 is a point.
struct FlatSampler {
  Point base;
  std::vector<Point> frame;
};

using Sampler = std::variant<LineSampler, CircleSampler, FlatSampler>;

/// A k-dimensional variety in R^n given by its defining polynomials and,
/// when available, a parametric sampler.
struct VarietySpec {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<Polynomial> defining;
  std::optional<Sampler> sampler;

  /// max_j |p_j(x)| over the defining polynomials.
  double residual(std::span<const double> x) const;

  /// The line form (base, unit direction) when this variety is a line.
  std::optional<LineSampler> as_line() const;
};

VarietySpec make_line(Point base, Point direction);
/// In R^2 the frame may be omitted (standard basis).
VarietySpec make_circle(Point center, double radius, std::optional<std::array<Point, 2>> frame = {});
VarietySpec make_flat(Point base, std::vector<Point> frame);
VarietySpec make_point(Point p);
/// Residual checks only; sampling operations reject it.
VarietySpec make_implicit(std::size_t n, std::size_t k, std::vector<Polynomial> polys);

/// Points of the variety inside the closed ball B_R, deterministic in the
/// seed. Lines and circles use jittered stratified parameters so spacing
/// shrinks like 1/count; flats of dimension >= 2 sample uniformly. Returns an
/// empty list when the variety misses the ball.
std::vector<Point> sample_in_ball(const VarietySpec& gamma, double radius, std::size_t count,
                                  std::uint64_t seed);

/// Points filling N_delta(gamma) ∩ B_R. Each point carries the same weight,
/// so the weight sum estimates the tube volume.
struct WeightedCloud {
  std::vector<Point> points;
  /// anchors[i] is the on-variety point that points[i] was jittered from.
  std::vector<Point> anchors;
  double weight = 0.0;

  double total_weight() const { return weight * static_cast<double>(points.size()); }
};

/// Anchors are drawn on gamma ∩ B_{R+delta} and displaced uniformly within
/// the normal (n-k)-ball of radius delta; points that leave B_R are dropped.
/// weight = vol_k(gamma ∩ B_{R+delta}) * vol(normal delta-ball) / count.
WeightedCloud tube_sample(const VarietySpec& gamma, double delta, double radius, std::size_t count,
                          std::uint64_t seed);

/// Orthonormal basis of the orthogonal complement of span(frame) in R^n.
std::vector<Point> orthogonal_complement(std::span<const Point> frame, std::size_t n);

}  // namespace ppart
