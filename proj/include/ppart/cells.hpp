#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ppart/polyalg.hpp"
#include "ppart/varieties.hpp"

namespace ppart {

/// Largest number of factors s supported (tables have 2^s entries).
inline constexpr std::size_t kMaxFactors = 20;

/// Element w of Z_2^s. Bit j (0-based) holds w_{j+1}; w_j = 0 means P_j > 0
/// and w_j = 1 means P_j < 0. Table index equals `bits`.
struct SignVector {
  std::uint32_t bits = 0;

  constexpr bool operator[](std::size_t j) const { return (bits >> j) & 1U; }
  constexpr SignVector flipped(std::size_t j) const { return {bits ^ (1U << j)}; }
  friend constexpr auto operator<=>(SignVector, SignVector) = default;
};

/// v . w over Z_2.
constexpr int parity(SignVector v, SignVector w) { return std::popcount(v.bits & w.bits) & 1; }

/// Number of varieties entering each of the 2^s cells.
class CellCounts {
 public:
  explicit CellCounts(std::size_t s);
  CellCounts(std::size_t s, std::vector<std::int64_t> values);

  std::size_t s() const { return s_; }
  std::size_t size() const { return values_.size(); }
  std::int64_t operator[](SignVector w) const { return values_[w.bits]; }
  std::int64_t& operator[](SignVector w) { return values_[w.bits]; }
  std::span<const std::int64_t> values() const { return values_; }

  std::int64_t max() const;
  std::int64_t total() const;

  friend bool operator==(const CellCounts&, const CellCounts&) = default;

 private:
  std::size_t s_;
  std::vector<std::int64_t> values_;
};

/// Sign vector of x, or nullopt when some |P_j(x)| <= tau (x lies on the
/// zero set and belongs to no open cell).
std::optional<SignVector> sign_vector(std::span<const Polynomial> pvec, std::span<const double> x,
                                      double tau);

enum class CountMethod {
  /// Sample each variety inside B_R and read sign vectors.
  sampled,
  /// Lines use exact univariate root isolation over the whole line; other
  /// varieties fall back to sampling.
  exact_lines,
};

struct SamplingConfig {
  double radius = 4.0;
  /// Points per variety; 0 selects 64 * (R * D + 1) per dimension of the variety.
  std::size_t count = 0;
  double tau = 1e-9;
  std::uint64_t seed = 0;
  CountMethod method = CountMethod::sampled;
};

/// Number of on-variety samples used for a variety of dimension k when the
/// product polynomial has degree D.
std::size_t sample_count(const SamplingConfig& cfg, std::size_t k, std::size_t D);

/// Total degree of the product of pvec.
std::size_t product_degree(std::span<const Polynomial> pvec);

/// Cells O(P, w) met by gamma, as a 2^s membership table. Sampling is
/// one-sided: it may miss a cell, but never reports one gamma does not meet.
std::vector<bool> cells_entered(const VarietySpec& gamma, std::span<const Polynomial> pvec,
                                const SamplingConfig& cfg);

/// I^gamma(P, w) evaluated by sampling gamma ∩ B_R.
int indicator(const VarietySpec& gamma, std::span<const Polynomial> pvec, SignVector w,
              const SamplingConfig& cfg);

CellCounts counts(std::span<const VarietySpec> varieties, std::span<const Polynomial> pvec,
                  const SamplingConfig& cfg);

struct LineCells {
  /// Sign vectors realized on open intervals of the line, ascending by bits.
  std::vector<SignVector> cells;
  /// True when the line lies inside some Z(P_j); then no cell is entered.
  bool degenerate = false;
};

/// Exact enumeration along a line by isolating the sign changes of every
/// restriction t -> P_j(base + t dir). At most D + 1 cells for product degree D.
LineCells cells_entered_line(const VarietySpec& line, std::span<const Polynomial> pvec);

}  // namespace ppart
