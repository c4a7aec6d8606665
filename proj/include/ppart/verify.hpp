#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ppart {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::string suite;
  std::vector<PropertyResult> properties;

  bool passed() const;
  void add(std::string name, bool passed, std::string detail = {});
  std::string to_json() const;
};

struct BorsukOptions {
  std::size_t s = 3;
  std::uint64_t seed = 0;
  /// Random perturbed maps handed to continuation_zero; 0 skips that property.
  std::size_t continuation_seeds = 10;
  double lambda = 0.3;
};

/// Zero count, Jacobian shape and finite-difference agreement, equivariance,
/// and optionally continuation toward perturbed maps.
VerifyReport verify_borsuk(const BorsukOptions& opts);

/// Transform involution, equidistribution test and the counting identity on
/// random tables of size 2^s.
VerifyReport verify_spectrum(std::size_t s, std::uint64_t seed, std::size_t tables = 100);

/// Flipping block j negates P_j, permutes counts by w -> w + e_j and
/// multiplies G_v by (-1)^(v_j); checked on random points for `seeds` seeds.
VerifyReport verify_flip_chain(std::size_t s, std::size_t seeds, std::uint64_t seed);

/// Random lines in R^n against random factor tuples of product degree D.
VerifyReport bench_line_cells(std::size_t D, std::size_t trials, std::size_t n, std::uint64_t seed);

/// Schedule certificates on the grid, range, separation and witness properties.
VerifyReport verify_mollifier(std::span<const double> delta_grid, std::uint64_t seed, std::size_t configs = 50);

}  // namespace ppart
