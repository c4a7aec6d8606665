#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ppart/polyalg.hpp"

namespace ppart {

/// Point of X_s = S^1 x S^2 x S^4 x ... x S^(2^(s-1)). Block j (0-based) is a
/// unit vector in R^(2^j + 1).
class XsPoint {
 public:
  XsPoint() = default;
  /// Validates block lengths and unit norms (within 1e-12).
  explicit XsPoint(std::vector<std::vector<double>> blocks);

  std::size_t s() const { return blocks_.size(); }
  std::span<const double> block(std::size_t j) const { return blocks_.at(j); }
  const std::vector<std::vector<double>>& blocks() const { return blocks_; }

  /// Sum of the sphere dimensions, 2^s - 1.
  std::size_t intrinsic_dimension() const;

  /// Concatenated coordinates.
  std::vector<double> flat() const;

  friend bool operator==(const XsPoint&, const XsPoint&) = default;

 private:
  std::vector<std::vector<double>> blocks_;
};

/// Ambient length of block j (0-based): 2^j + 1.
std::size_t block_size(std::size_t j);

/// Negates block j (0-based).
XsPoint flip(const XsPoint& x, std::size_t j);

/// Independent uniform points on each sphere factor.
XsPoint random_point(std::size_t s, std::uint64_t seed);

/// Normalises each block; throws InvalidArgument on a zero block.
XsPoint retract(std::vector<std::vector<double>> raw);

/// Projects `direction` (blockwise, same shape as x) onto the tangent space,
/// moves by h along it and retracts.
XsPoint tangent_step(const XsPoint& x, const std::vector<std::vector<double>>& direction, double h);

/// Embedding X_s -> prod_j Poly_{D_j}(R^n). Block j becomes the coefficient
/// vector on the first 2^j + 1 graded-lex monomials of degree <= D_j.
class Embedding {
 public:
  Embedding(std::size_t n, std::size_t s);

  std::size_t n() const { return n_; }
  std::size_t s() const { return degrees_.size(); }
  const std::vector<std::size_t>& degrees() const { return degrees_; }
  const std::vector<BasisPtr>& bases() const { return bases_; }
  /// D = sum_j D_j.
  std::size_t total_degree() const;

  std::vector<Polynomial> to_polys(const XsPoint& x) const;

 private:
  std::size_t n_;
  std::vector<std::size_t> degrees_;
  std::vector<BasisPtr> bases_;
};

std::vector<Polynomial> to_polys(const XsPoint& x, std::size_t n);

}  // namespace ppart
