#pragma once

#include <span>
#include <vector>

namespace ppart {

/// Horner evaluation; coefficients in ascending powers.
double horner(std::span<const double> coeffs, double t);

/// All real points where the polynomial changes sign, ascending.
///
/// Roots of even multiplicity do not change the sign and are not reported;
/// every root of odd multiplicity is. Isolation recurses on the derivative:
/// between consecutive sign-changing critical points the polynomial is
/// monotone, so each such interval (and the two outer intervals bounded by
/// the Cauchy root bound) holds at most one root, found by bisection. The
/// result therefore never has more entries than the degree.
///
/// Leading coefficients below 1e-15 of the largest coefficient are treated as
/// rounding noise and dropped. Throws NumericalFailure on non-finite input or
/// if bisection fails to converge within its iteration cap.
std::vector<double> sign_change_roots(std::span<const double> coeffs);

}  // namespace ppart
