#include "ppart/spectrum.hpp"

#include <algorithm>

#include "ppart/error.hpp"

namespace ppart {

Spectrum wht(const CellCounts& counts) {
  Spectrum out{counts.s(), std::vector<std::int64_t>(counts.values().begin(), counts.values().end())};
  fwht_in_place(std::span<std::int64_t>(out.values));
  return out;
}

std::vector<double> wht(std::span<const double> table) {
  std::vector<double> out(table.begin(), table.end());
  fwht_in_place(std::span<double>(out));
  return out;
}

CellCounts inverse_wht(const Spectrum& spectrum) {
  std::vector<std::int64_t> v = spectrum.values;
  fwht_in_place(std::span<std::int64_t>(v));
  const std::int64_t scale = std::int64_t{1} << spectrum.s;
  for (auto& c : v) {
    if (c % scale != 0) throw NumericalFailure("inverse_wht: spectrum is not the transform of an integer table");
    c /= scale;
  }
  return CellCounts(spectrum.s, std::move(v));
}

bool is_equidistributed(const CellCounts& counts) {
  const auto g = wht(counts);
  return std::all_of(g.values.begin() + 1, g.values.end(), [](std::int64_t x) { return x == 0; });
}

LemmaSides lemma_identity_check(const CellCounts& counts, SignVector u) {
  if (u.bits == 0) throw InvalidArgument("lemma_identity_check: u must be nonzero");
  if (u.bits >= counts.size()) throw InvalidArgument("lemma_identity_check: u out of range");
  const auto g = wht(counts);
  LemmaSides sides;
  for (std::uint32_t v = 0; v < g.values.size(); ++v)
    if (parity(SignVector{v}, u) == 1) sides.lhs += g.values[v];
  sides.rhs = (std::int64_t{1} << (counts.s() - 1)) * (counts[SignVector{0}] - counts[u]);
  return sides;
}

}  // namespace ppart
