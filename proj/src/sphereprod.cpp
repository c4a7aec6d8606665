#include "ppart/sphereprod.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "ppart/error.hpp"
#include "ppart/rng.hpp"
#include "vec.hpp"

namespace ppart {

using detail::dot;
using detail::norm;

std::size_t block_size(std::size_t j) { return (std::size_t{1} << j) + 1; }

XsPoint::XsPoint(std::vector<std::vector<double>> blocks) : blocks_(std::move(blocks)) {
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    if (blocks_[j].size() != block_size(j)) {
      std::ostringstream msg;
      msg << "XsPoint: block " << j << " has length " << blocks_[j].size() << ", expected " << block_size(j);
      throw DimensionMismatch(msg.str());
    }
    if (std::abs(norm(blocks_[j]) - 1.0) > 1e-12) {
      std::ostringstream msg;
      msg << "XsPoint: block " << j << " is not a unit vector";
      throw InvalidArgument(msg.str());
    }
  }
}

std::size_t XsPoint::intrinsic_dimension() const {
  std::size_t d = 0;
  for (const auto& b : blocks_) d += b.size() - 1;
  return d;
}

std::vector<double> XsPoint::flat() const {
  std::vector<double> out;
  for (const auto& b : blocks_) out.insert(out.end(), b.begin(), b.end());
  return out;
}

XsPoint flip(const XsPoint& x, std::size_t j) {
  if (j >= x.s()) throw InvalidArgument("flip: block index out of range");
  auto blocks = x.blocks();
  for (auto& c : blocks[j]) c = -c;
  return XsPoint(std::move(blocks));
}

XsPoint random_point(std::size_t s, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> blocks;
  for (std::size_t j = 0; j < s; ++j) blocks.push_back(uniform_on_sphere(rng, block_size(j)));
  return XsPoint(std::move(blocks));
}

XsPoint retract(std::vector<std::vector<double>> raw) {
  for (std::size_t j = 0; j < raw.size(); ++j) {
    const double len = norm(raw[j]);
    if (!(len > 0) || !std::isfinite(len)) {
      std::ostringstream msg;
      msg << "retract: block " << j << " is zero";
      throw InvalidArgument(msg.str());
    }
    // Blocks that are already unit up to rounding are kept bit-for-bit.
    if (std::abs(len - 1.0) <= 1e-15) continue;
    for (auto& c : raw[j]) c /= len;
    // A second pass pins the norm to 1 within a few ulps.
    const double again = norm(raw[j]);
    for (auto& c : raw[j]) c /= again;
  }
  return XsPoint(std::move(raw));
}

XsPoint tangent_step(const XsPoint& x, const std::vector<std::vector<double>>& direction, double h) {
  if (direction.size() != x.s()) throw DimensionMismatch("tangent_step: direction has wrong block count");
  if (h == 0.0) return x;
  auto blocks = x.blocks();
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const auto& d = direction[j];
    if (d.size() != blocks[j].size()) throw DimensionMismatch("tangent_step: direction block has wrong length");
    const double radial = dot(d, blocks[j]);
    for (std::size_t i = 0; i < d.size(); ++i) blocks[j][i] += h * (d[i] - radial * x.block(j)[i]);
  }
  return retract(std::move(blocks));
}

Embedding::Embedding(std::size_t n, std::size_t s) : n_(n), degrees_(degree_schedule(n, s)) {
  for (auto d : degrees_) {
    bases_.push_back(make_basis(n, d));
    if (bases_.back()->size() < block_size(bases_.size() - 1))
      throw DimensionMismatch("Embedding: polynomial space too small for its sphere factor");
  }
}

std::size_t Embedding::total_degree() const {
  return std::accumulate(degrees_.begin(), degrees_.end(), std::size_t{0});
}

std::vector<Polynomial> Embedding::to_polys(const XsPoint& x) const {
  if (x.s() != s()) throw DimensionMismatch("to_polys: point has a different number of factors");
  std::vector<Polynomial> out;
  out.reserve(s());
  for (std::size_t j = 0; j < s(); ++j) {
    std::vector<double> coeffs(bases_[j]->size(), 0.0);
    auto b = x.block(j);
    std::copy(b.begin(), b.end(), coeffs.begin());
    out.emplace_back(bases_[j], std::move(coeffs));
  }
  return out;
}

std::vector<Polynomial> to_polys(const XsPoint& x, std::size_t n) { return Embedding(n, x.s()).to_polys(x); }

}  // namespace ppart
