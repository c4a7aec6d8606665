#include "ppart/polyalg.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "ppart/error.hpp"

namespace ppart {

std::uint64_t basis_dim(std::size_t n, std::size_t D) {
  if (n < 1) throw InvalidArgument("basis_dim: n must be >= 1");
  // C(D + i, i) for i = 1..n; each partial product is an integer.
  unsigned __int128 acc = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    acc = acc * (D + i);
    acc /= i;
    if (acc > UINT64_MAX) {
      std::ostringstream msg;
      msg << "basis_dim(" << n << ", " << D << ") overflows 64 bits";
      throw ArithmeticOverflow(msg.str());
    }
  }
  return static_cast<std::uint64_t>(acc);
}

std::vector<std::size_t> degree_schedule(std::size_t n, std::size_t s) {
  if (n < 1 || s < 1) throw InvalidArgument("degree_schedule: n and s must be >= 1");
  if (s > 63) throw InvalidArgument("degree_schedule: s too large");
  std::vector<std::size_t> degrees;
  degrees.reserve(s);
  std::size_t D = 1;
  for (std::size_t j = 1; j <= s; ++j) {
    const std::uint64_t target = std::uint64_t{1} << (j - 1);
    // The schedule is nondecreasing, so the search resumes from the previous D.
    while (basis_dim(n, D) <= target) ++D;
    degrees.push_back(D);
  }
  return degrees;
}

namespace {

void append_degree(std::size_t n, unsigned remaining, std::size_t pos, std::vector<unsigned>& cur,
                   std::vector<unsigned>& out) {
  if (pos + 1 == n) {
    cur[pos] = remaining;
    out.insert(out.end(), cur.begin(), cur.end());
    return;
  }
  for (unsigned e = remaining + 1; e-- > 0;) {
    cur[pos] = e;
    append_degree(n, remaining - e, pos + 1, cur, out);
  }
}

}  // namespace

MonomialBasis::MonomialBasis(std::size_t n, std::size_t degree)
    : n_(n), degree_(degree), size_(static_cast<std::size_t>(basis_dim(n, degree))) {
  exps_.reserve(size_ * n_);
  std::vector<unsigned> cur(n_, 0);
  for (unsigned d = 0; d <= degree_; ++d) append_degree(n_, d, 0, cur, exps_);
  total_.resize(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    auto e = exponents(i);
    total_[i] = 0;
    for (unsigned c : e) total_[i] += c;
    index_.emplace(std::vector<unsigned>(e.begin(), e.end()), i);
  }
}

std::optional<std::size_t> MonomialBasis::index_of(std::span<const unsigned> e) const {
  if (e.size() != n_) return std::nullopt;
  auto it = index_.find(std::vector<unsigned>(e.begin(), e.end()));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void MonomialBasis::evaluate_monomials(std::span<const double> x, std::span<double> out) const {
  if (x.size() != n_) throw DimensionMismatch("evaluate_monomials: point has wrong dimension");
  const std::size_t m = std::min(out.size(), size_);
  std::vector<double> pw(n_ * (degree_ + 1));
  for (std::size_t i = 0; i < n_; ++i) {
    pw[i * (degree_ + 1)] = 1.0;
    for (std::size_t e = 1; e <= degree_; ++e)
      pw[i * (degree_ + 1) + e] = pw[i * (degree_ + 1) + e - 1] * x[i];
  }
  for (std::size_t k = 0; k < m; ++k) {
    double v = 1.0;
    auto e = exponents(k);
    for (std::size_t i = 0; i < n_; ++i) v *= pw[i * (degree_ + 1) + e[i]];
    out[k] = v;
  }
}

BasisPtr make_basis(std::size_t n, std::size_t degree) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, std::size_t>, BasisPtr> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{n, degree}];
  if (!slot) slot = std::make_shared<const MonomialBasis>(n, degree);
  return slot;
}

double grad_bound(const MonomialBasis& basis, double radius) {
  if (radius < 0) throw InvalidArgument("grad_bound: negative radius");
  const double D = static_cast<double>(basis.degree());
  if (basis.degree() == 0) return 0.0;
  return std::sqrt(static_cast<double>(basis.size())) * static_cast<double>(basis.dimension()) * D *
         std::pow(std::max(1.0, radius), D - 1.0);
}

Polynomial::Polynomial(BasisPtr basis, std::vector<double> coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  if (!basis_) throw InvalidArgument("Polynomial: null basis");
  if (coeffs_.size() != basis_->size())
    throw DimensionMismatch("Polynomial: coefficient count does not match basis size");
}

Polynomial Polynomial::zero(BasisPtr basis) {
  const std::size_t m = basis->size();
  return Polynomial(std::move(basis), std::vector<double>(m, 0.0));
}

Polynomial Polynomial::constant(std::size_t n, double c) {
  return Polynomial(make_basis(n, 0), {c});
}

Polynomial Polynomial::from_terms(
    std::size_t n, const std::vector<std::pair<std::vector<unsigned>, double>>& terms) {
  std::size_t degree = 0;
  for (const auto& [e, c] : terms) {
    if (e.size() != n) throw DimensionMismatch("from_terms: exponent tuple has wrong length");
    std::size_t d = 0;
    for (unsigned k : e) d += k;
    degree = std::max(degree, d);
  }
  auto basis = make_basis(n, degree);
  std::vector<double> coeffs(basis->size(), 0.0);
  for (const auto& [e, c] : terms) coeffs[*basis->index_of(e)] += c;
  return Polynomial(std::move(basis), std::move(coeffs));
}

std::size_t Polynomial::degree() const {
  std::size_t d = 0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0.0) d = std::max<std::size_t>(d, basis_->total_degree(i));
  return d;
}

double Polynomial::coeff_norm() const {
  double s = 0.0;
  for (double c : coeffs_) s += c * c;
  return std::sqrt(s);
}

namespace {

void fill_powers(std::span<const double> x, std::size_t D, std::vector<double>& pw) {
  pw.resize(x.size() * (D + 1));
  for (std::size_t i = 0; i < x.size(); ++i) {
    double* row = pw.data() + i * (D + 1);
    row[0] = 1.0;
    for (std::size_t e = 1; e <= D; ++e) row[e] = row[e - 1] * x[i];
  }
}

}  // namespace

double Polynomial::operator()(std::span<const double> x) const {
  const std::size_t n = basis_->dimension();
  if (x.size() != n) throw DimensionMismatch("eval: point has wrong dimension");
  const std::size_t D = basis_->degree();
  thread_local std::vector<double> pw;
  fill_powers(x, D, pw);
  double sum = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const double c = coeffs_[k];
    if (c == 0.0) continue;
    auto e = basis_->exponents(k);
    double m = c;
    for (std::size_t i = 0; i < n; ++i) m *= pw[i * (D + 1) + e[i]];
    sum += m;
  }
  return sum;
}

Point Polynomial::gradient(std::span<const double> x) const {
  const std::size_t n = basis_->dimension();
  if (x.size() != n) throw DimensionMismatch("grad: point has wrong dimension");
  const std::size_t D = basis_->degree();
  thread_local std::vector<double> pw;
  fill_powers(x, D, pw);
  Point g(n, 0.0);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const double c = coeffs_[k];
    if (c == 0.0) continue;
    auto e = basis_->exponents(k);
    for (std::size_t i = 0; i < n; ++i) {
      if (e[i] == 0) continue;
      double m = c * e[i] * pw[i * (D + 1) + e[i] - 1];
      for (std::size_t l = 0; l < n; ++l)
        if (l != i) m *= pw[l * (D + 1) + e[l]];
      g[i] += m;
    }
  }
  return g;
}

Polynomial Polynomial::operator-() const {
  std::vector<double> neg(coeffs_.size());
  std::transform(coeffs_.begin(), coeffs_.end(), neg.begin(), [](double c) { return -c; });
  return Polynomial(basis_, std::move(neg));
}

double eval(const Polynomial& p, std::span<const double> x) { return p(x); }

Point grad(const Polynomial& p, std::span<const double> x) { return p.gradient(x); }

Polynomial multiply(const Polynomial& p, const Polynomial& q) {
  if (p.dimension() != q.dimension()) throw DimensionMismatch("multiply: dimension mismatch");
  const std::size_t n = p.dimension();
  auto basis = make_basis(n, p.basis().degree() + q.basis().degree());
  std::vector<double> out(basis->size(), 0.0);
  std::vector<unsigned> e(n);
  for (std::size_t a = 0; a < p.coeffs().size(); ++a) {
    if (p.coeffs()[a] == 0.0) continue;
    for (std::size_t b = 0; b < q.coeffs().size(); ++b) {
      if (q.coeffs()[b] == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) e[i] = p.basis().exponents(a)[i] + q.basis().exponents(b)[i];
      out[*basis->index_of(e)] += p.coeffs()[a] * q.coeffs()[b];
    }
  }
  return Polynomial(std::move(basis), std::move(out));
}

std::vector<double> restrict_to_line(const Polynomial& p, std::span<const double> base,
                                     std::span<const double> dir) {
  const std::size_t n = p.dimension();
  if (base.size() != n || dir.size() != n)
    throw DimensionMismatch("restrict_to_line: line has wrong dimension");
  const std::size_t D = p.basis().degree();
  // powers[i][e] = coefficients of (base_i + t dir_i)^e, each of length e + 1.
  std::vector<std::vector<std::vector<double>>> powers(n);
  for (std::size_t i = 0; i < n; ++i) {
    powers[i].resize(D + 1);
    powers[i][0] = {1.0};
    for (std::size_t e = 1; e <= D; ++e) {
      const auto& prev = powers[i][e - 1];
      std::vector<double> next(e + 1, 0.0);
      for (std::size_t k = 0; k < prev.size(); ++k) {
        next[k] += prev[k] * base[i];
        next[k + 1] += prev[k] * dir[i];
      }
      powers[i][e] = std::move(next);
    }
  }
  std::vector<double> result(D + 1, 0.0);
  std::vector<double> term, tmp;
  for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
    const double c = p.coeffs()[k];
    if (c == 0.0) continue;
    auto e = p.basis().exponents(k);
    term.assign(1, c);
    for (std::size_t i = 0; i < n; ++i) {
      if (e[i] == 0) continue;
      const auto& f = powers[i][e[i]];
      tmp.assign(term.size() + f.size() - 1, 0.0);
      for (std::size_t a = 0; a < term.size(); ++a)
        for (std::size_t b = 0; b < f.size(); ++b) tmp[a + b] += term[a] * f[b];
      term.swap(tmp);
    }
    for (std::size_t a = 0; a < term.size(); ++a) result[a] += term[a];
  }
  return result;
}

}  // namespace ppart
