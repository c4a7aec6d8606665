#include "ppart/univariate.hpp"

#include <algorithm>
#include <cmath>

#include "ppart/error.hpp"

namespace ppart {

double horner(std::span<const double> coeffs, double t) {
  double v = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) v = v * t + coeffs[k];
  return v;
}

namespace {

constexpr int kMaxBisections = 400;

int sign_of(double v) { return (v > 0) - (v < 0); }

double bisect(std::span<const double> c, double lo, double hi, int sign_lo) {
  for (int it = 0; it < kMaxBisections; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;
    const int sm = sign_of(horner(c, mid));
    if (sm == 0) return mid;
    if (sm == sign_lo)
      lo = mid;
    else
      hi = mid;
  }
  throw NumericalFailure("sign_change_roots: bisection did not converge");
}

std::vector<double> roots_rec(std::vector<double> c) {
  double scale = 0.0;
  for (double v : c) {
    if (!std::isfinite(v)) throw NumericalFailure("sign_change_roots: non-finite coefficient");
    scale = std::max(scale, std::abs(v));
  }
  while (!c.empty() && std::abs(c.back()) <= 1e-15 * scale) c.pop_back();
  const std::size_t deg = c.empty() ? 0 : c.size() - 1;
  if (deg == 0) return {};
  if (deg == 1) return {-c[0] / c[1]};

  double bound = 0.0;
  for (std::size_t k = 0; k < deg; ++k) bound = std::max(bound, std::abs(c[k] / c[deg]));
  bound += 1.0;
  if (!std::isfinite(bound)) throw NumericalFailure("sign_change_roots: root bound overflow");

  std::vector<double> deriv(deg);
  for (std::size_t k = 1; k <= deg; ++k) deriv[k - 1] = c[k] * static_cast<double>(k);
  std::vector<double> knots = roots_rec(std::move(deriv));

  std::vector<double> edges;
  edges.reserve(knots.size() + 2);
  edges.push_back(-bound);
  for (double k : knots)
    if (k > -bound && k < bound) edges.push_back(k);
  edges.push_back(bound);

  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i], hi = edges[i + 1];
    if (!(hi > lo)) continue;
    const int sl = sign_of(horner(c, lo));
    const int sh = sign_of(horner(c, hi));
    if (sl == 0 || sh == 0 || sl == sh) continue;
    roots.push_back(bisect(c, lo, hi, sl));
  }
  // A critical point that is itself a sign-changing root (odd multiplicity >= 3).
  for (double k : knots) {
    if (sign_of(horner(c, k)) != 0) continue;
    const double eps = 1e-9 * std::max(1.0, std::abs(k));
    if (sign_of(horner(c, k - eps)) * sign_of(horner(c, k + eps)) < 0) roots.push_back(k);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  if (roots.size() > deg) roots.resize(deg);
  return roots;
}

}  // namespace

std::vector<double> sign_change_roots(std::span<const double> coeffs) {
  return roots_rec(std::vector<double>(coeffs.begin(), coeffs.end()));
}

}  // namespace ppart
