#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ppart/cells.hpp"

namespace ppart {

/// In-place unnormalised Walsh-Hadamard butterfly: a[v] <- sum_w (-1)^(v.w) a[w].
/// The length must be a power of two.
template <typename T>
void fwht_in_place(std::span<T> a) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fwht: length must be a power of two");
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const T x = a[j];
        const T y = a[j + h];
        a[j] = x + y;
        a[j + h] = x - y;
      }
    }
  }
}

/// Balance functionals G_v = sum_w (-1)^(v.w) counts(w), exact on integers.
struct Spectrum {
  std::size_t s = 0;
  std::vector<std::int64_t> values;

  std::int64_t operator[](SignVector v) const { return values[v.bits]; }
};

Spectrum wht(const CellCounts& counts);

/// Real-valued transform, used for mollified count tables.
std::vector<double> wht(std::span<const double> table);

/// Exact inverse: counts(w) = 2^-s sum_v (-1)^(v.w) G_v.
CellCounts inverse_wht(const Spectrum& spectrum);

/// True iff G_v = 0 for every v != 0.
bool is_equidistributed(const CellCounts& counts);

struct LemmaSides {
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
};

/// lhs = sum over v with v.u = 1 of G_v; rhs = 2^(s-1) (counts(0) - counts(u)).
/// The two always agree; the check exercises that counting identity.
LemmaSides lemma_identity_check(const CellCounts& counts, SignVector u);

}  // namespace ppart
