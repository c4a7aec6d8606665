#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace ppart {

using Point = std::vector<double>;

/// Dimension of the space of polynomials of degree <= D in n variables,
/// C(n + D, n). Throws ArithmeticOverflow if the value does not fit in 64 bits.
std::uint64_t basis_dim(std::size_t n, std::size_t D);

/// Per-factor degrees D_1..D_s: D_j is the least D >= 1 with basis_dim(n, D) > 2^(j-1).
std::vector<std::size_t> degree_schedule(std::size_t n, std::size_t s);

/// Monomials x^e with |e| <= D in graded-lexicographic order: the constant
/// first, then by total degree, and within a degree lexicographically
/// descending in the exponents (x before y before z).
class MonomialBasis {
 public:
  MonomialBasis(std::size_t n, std::size_t degree);

  std::size_t dimension() const { return n_; }
  std::size_t degree() const { return degree_; }
  std::size_t size() const { return size_; }

  std::span<const unsigned> exponents(std::size_t i) const {
    return {exps_.data() + i * n_, n_};
  }
  unsigned total_degree(std::size_t i) const { return total_[i]; }

  std::optional<std::size_t> index_of(std::span<const unsigned> e) const;

  /// Veronese lift: writes the first out.size() monomials evaluated at x.
  void evaluate_monomials(std::span<const double> x, std::span<double> out) const;

 private:
  std::size_t n_;
  std::size_t degree_;
  std::size_t size_;
  std::vector<unsigned> exps_;
  std::vector<unsigned> total_;
  std::map<std::vector<unsigned>, std::size_t> index_;
};

using BasisPtr = std::shared_ptr<const MonomialBasis>;

/// Shared, memoised basis for (n, D).
BasisPtr make_basis(std::size_t n, std::size_t degree);

/// Crude bound on |grad Q(x)| over |x| <= R for every Q on this basis with
/// unit Euclidean coefficient norm: sqrt(size) * n * D * max(1, R)^(D-1).
double grad_bound(const MonomialBasis& basis, double radius);

/// Dense polynomial whose coefficients are aligned with a MonomialBasis.
class Polynomial {
 public:
  Polynomial(BasisPtr basis, std::vector<double> coeffs);

  static Polynomial zero(BasisPtr basis);
  static Polynomial constant(std::size_t n, double c);

  /// Builds a polynomial from (exponent tuple, coefficient) pairs; the basis
  /// degree is the largest total degree present.
  static Polynomial from_terms(std::size_t n,
                               const std::vector<std::pair<std::vector<unsigned>, double>>& terms);

  const MonomialBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  std::size_t dimension() const { return basis_->dimension(); }
  std::span<const double> coeffs() const { return coeffs_; }

  /// Highest total degree among nonzero coefficients (0 for the zero polynomial).
  std::size_t degree() const;
  double coeff_norm() const;

  double operator()(std::span<const double> x) const;
  Point gradient(std::span<const double> x) const;

  Polynomial operator-() const;

 private:
  BasisPtr basis_;
  std::vector<double> coeffs_;
};

double eval(const Polynomial& p, std::span<const double> x);
Point grad(const Polynomial& p, std::span<const double> x);

/// Product p*q expressed on the basis of degree deg(p basis) + deg(q basis).
Polynomial multiply(const Polynomial& p, const Polynomial& q);

/// Coefficients (ascending powers of t) of t -> p(base + t * dir).
std::vector<double> restrict_to_line(const Polynomial& p, std::span<const double> base,
                                     std::span<const double> dir);

}  // namespace ppart
