#include "ppart/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "ppart/cells.hpp"
#include "ppart/equivariant.hpp"
#include "ppart/error.hpp"
#include "ppart/mollifier.hpp"
#include "ppart/rng.hpp"
#include "ppart/spectrum.hpp"
#include "ppart/sphereprod.hpp"

namespace ppart {

bool VerifyReport::passed() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.passed; });
}

void VerifyReport::add(std::string name, bool ok, std::string detail) {
  properties.push_back({std::move(name), ok, std::move(detail)});
}

std::string VerifyReport::to_json() const {
  nlohmann::json doc;
  doc["suite"] = suite;
  doc["passed"] = passed();
  doc["properties"] = nlohmann::json::array();
  for (const auto& p : properties)
    doc["properties"].push_back({{"name", p.name}, {"passed", p.passed}, {"detail", p.detail}});
  return doc.dump(2) + "\n";
}

namespace {

template <typename T>
std::string str(const T& value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

CellCounts random_table(std::size_t s, Rng& rng, std::int64_t max_value) {
  std::uniform_int_distribution<std::int64_t> dist(0, max_value);
  std::vector<std::int64_t> values(std::size_t{1} << s);
  for (auto& v : values) v = dist(rng);
  return CellCounts(s, std::move(values));
}

Polynomial random_poly(std::size_t n, std::size_t degree, Rng& rng) {
  auto basis = make_basis(n, degree);
  std::normal_distribution<double> normal;
  std::vector<double> coeffs(basis->size());
  for (auto& c : coeffs) c = normal(rng);
  return Polynomial(basis, std::move(coeffs));
}

VarietySpec random_line(std::size_t n, Rng& rng) {
  return make_line(uniform_in_ball(rng, n, 1.0), uniform_on_sphere(rng, n));
}

// Unit coefficient vector for (a . x - c) in R^2 on the degree-1 basis.
Polynomial unit_linear(double c, const Point& a) {
  const double norm = std::sqrt(1.0 + c * c);
  return Polynomial(make_basis(2, 1), {-c / norm, a[0] / norm, a[1] / norm});
}

Polynomial random_unit_linear(Rng& rng) {
  auto v = uniform_on_sphere(rng, 3);
  return Polynomial(make_basis(2, 1), v);
}

}  // namespace

VerifyReport verify_borsuk(const BorsukOptions& opts) {
  VerifyReport rep;
  rep.suite = "borsuk s=" + str(opts.s);
  const std::size_t s = opts.s;
  const auto zeros = g_zeros(s);
  const auto g = model_map(s);

  bool zero_ok = zeros.size() == (std::size_t{1} << s);
  for (const auto& z : zeros) zero_ok = zero_ok && residual_norm(g, z) == 0.0;
  rep.add("zero_count", zero_ok, str(zeros.size()) + " zeros, expected " + str(std::size_t{1} << s));

  bool diag_ok = true;
  double fd_error = 0.0;
  const double h = 1e-5;
  for (const auto& z : zeros) {
    const Eigen::MatrixXd jac = jacobian_g(z);
    for (Eigen::Index r = 0; r < jac.rows(); ++r)
      for (Eigen::Index c = 0; c < jac.cols(); ++c) {
        const double e = jac(r, c);
        diag_ok = diag_ok && (r == c ? std::abs(e) == 1.0 : e == 0.0);
      }
    for (std::uint32_t v = 1; v < (1U << s); ++v) {
      const auto ref = x_coord(SignVector{v});
      auto plus = z.blocks(), minus = z.blocks();
      plus[ref.block][ref.index] += h;
      minus[ref.block][ref.index] -= h;
      const auto gp = model_g(retract(plus)), gm = model_g(retract(minus));
      for (std::size_t u = 0; u < gp.size(); ++u)
        fd_error = std::max(fd_error, std::abs((gp[u] - gm[u]) / (2 * h) - jac(static_cast<Eigen::Index>(u), v - 1)));
    }
  }
  rep.add("jacobian_diagonal_pm1", diag_ok);
  rep.add("jacobian_finite_difference", fd_error <= 1e-6, "max deviation " + str(fd_error));

  const double violation = check_equivariance(g, 100, substream(opts.seed, "equivariance"));
  rep.add("model_equivariance", violation <= 1e-14, "max violation " + str(violation));

  const auto found = continuation_zero(g, {});
  bool invariant = found.zero.has_value();
  if (found.zero)
    for (std::size_t j = 0; j < s; ++j) {
      const auto b = found.zero->block(j);
      invariant = invariant && std::abs(b[0]) > 0.9;
      for (std::size_t i = 1; i < b.size(); ++i) invariant = invariant && std::abs(b[i]) < 1e-10;
    }
  rep.add("model_zero_shape", invariant);

  if (opts.continuation_seeds > 0) {
    std::size_t successes = 0, orbit_failures = 0;
    for (std::size_t i = 0; i < opts.continuation_seeds; ++i) {
      const auto f = random_equivariant(s, opts.lambda, substream(opts.seed, "map", i));
      ContinuationConfig cfg;
      cfg.seed = substream(opts.seed, "continuation", i);
      const auto res = continuation_zero(f, cfg);
      if (!res.success()) continue;
      ++successes;
      if (*std::max_element(res.orbit_residuals.begin(), res.orbit_residuals.end()) >= 1e-8) ++orbit_failures;
    }
    const double rate = static_cast<double>(successes) / static_cast<double>(opts.continuation_seeds);
    rep.add("continuation_success", rate >= 0.9, str(successes) + "/" + str(opts.continuation_seeds));
    rep.add("continuation_orbits", orbit_failures == 0, str(orbit_failures) + " orbit failures");
  }
  return rep;
}

VerifyReport verify_spectrum(std::size_t s, std::uint64_t seed, std::size_t tables) {
  VerifyReport rep;
  rep.suite = "spectrum s=" + str(s);
  Rng rng(substream(seed, "spectrum", s));
  const std::size_t size = std::size_t{1} << s;

  bool involution = true, direct = true;
  for (std::size_t t = 0; t < tables; ++t) {
    const CellCounts c = random_table(s, rng, 1000);
    const Spectrum g = wht(c);
    involution = involution && inverse_wht(g) == c;
    if (s <= 6) {
      for (std::uint32_t v = 0; v < size; ++v) {
        std::int64_t sum = 0;
        for (std::uint32_t w = 0; w < size; ++w) sum += parity(SignVector{v}, SignVector{w}) ? -c[SignVector{w}] : c[SignVector{w}];
        direct = direct && sum == g.values[v];
      }
    }
  }
  rep.add("involution", involution);
  if (s <= 6) rep.add("direct_sum", direct);

  auto constant = [](const CellCounts& c) {
    return std::all_of(c.values().begin(), c.values().end(), [&](std::int64_t x) { return x == c.values()[0]; });
  };
  bool equi = true;
  std::size_t checked = 0;
  if (s <= 4) {
    // Every table with entries below `base`.
    const std::int64_t base = s <= 3 ? 3 : 2;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < size; ++i) total *= static_cast<std::uint64_t>(base);
    for (std::uint64_t code = 0; code < total; ++code) {
      std::vector<std::int64_t> values(size);
      std::uint64_t rest = code;
      for (auto& v : values) {
        v = static_cast<std::int64_t>(rest % static_cast<std::uint64_t>(base));
        rest /= static_cast<std::uint64_t>(base);
      }
      const CellCounts c(s, std::move(values));
      equi = equi && is_equidistributed(c) == constant(c);
      ++checked;
    }
  }
  for (std::size_t t = 0; t < tables; ++t) {
    CellCounts c = random_table(s, rng, 3);
    if (t % 2 == 0) c = CellCounts(s, std::vector<std::int64_t>(size, static_cast<std::int64_t>(t)));
    equi = equi && is_equidistributed(c) == constant(c);
    ++checked;
  }
  rep.add("equidistributed_iff_constant", equi, str(checked) + " tables");

  bool identity = true;
  std::uniform_int_distribution<std::uint32_t> pick(1, static_cast<std::uint32_t>(size - 1));
  for (std::size_t t = 0; t < tables; ++t) {
    const CellCounts c = random_table(s, rng, 1000);
    const auto sides = lemma_identity_check(c, SignVector{pick(rng)});
    identity = identity && sides.lhs == sides.rhs;
  }
  rep.add("counting_identity", identity);
  return rep;
}

VerifyReport verify_flip_chain(std::size_t s, std::size_t seeds, std::uint64_t seed) {
  VerifyReport rep;
  rep.suite = "flip-chain s=" + str(s);
  const Embedding emb(2, s);
  SamplingConfig sampling;
  sampling.count = 256;
  bool negates = true, permutes = true, signs = true;
  for (std::size_t i = 0; i < seeds; ++i) {
    Rng rng(substream(seed, "flip-chain", i));
    std::vector<VarietySpec> lines;
    for (int l = 0; l < 8; ++l) lines.push_back(random_line(2, rng));
    sampling.seed = substream(seed, "flip-sampling", i);
    const XsPoint x = random_point(s, substream(seed, "flip-point", i));
    const auto p = emb.to_polys(x);
    const CellCounts c = counts(lines, p, sampling);
    const Spectrum g = wht(c);
    for (std::size_t j = 0; j < s; ++j) {
      const auto q = emb.to_polys(flip(x, j));
      for (std::size_t b = 0; b < s; ++b)
        for (std::size_t k = 0; k < p[b].coeffs().size(); ++k)
          negates = negates && q[b].coeffs()[k] == (b == j ? -p[b].coeffs()[k] : p[b].coeffs()[k]);
      const CellCounts cf = counts(lines, q, sampling);
      for (std::uint32_t w = 0; w < c.size(); ++w) permutes = permutes && cf[SignVector{w}.flipped(j)] == c[SignVector{w}];
      const Spectrum gf = wht(cf);
      for (std::uint32_t v = 0; v < c.size(); ++v)
        signs = signs && gf.values[v] == (SignVector{v}[j] ? -g.values[v] : g.values[v]);
    }
  }
  rep.add("flip_negates_factor", negates);
  rep.add("flip_permutes_counts", permutes);
  rep.add("flip_signs_spectrum", signs);
  return rep;
}

VerifyReport bench_line_cells(std::size_t D, std::size_t trials, std::size_t n, std::uint64_t seed) {
  if (D < 1) throw InvalidArgument("bench_line_cells: D must be positive");
  VerifyReport rep;
  rep.suite = "line-cells D=" + str(D) + " n=" + str(n);
  Rng rng(substream(seed, "line-cells", D * 16 + n));
  std::size_t violations = 0, missed = 0, largest = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    // Random composition of D into s positive factor degrees.
    const std::size_t s = 1 + static_cast<std::size_t>(rng() % std::min<std::size_t>(D, 4));
    std::vector<std::size_t> degrees(s, 1);
    for (std::size_t extra = D - s; extra > 0; --extra) ++degrees[rng() % s];
    std::vector<Polynomial> pvec;
    for (auto d : degrees) pvec.push_back(random_poly(n, d, rng));
    const VarietySpec line = random_line(n, rng);
    const LineCells cells = cells_entered_line(line, pvec);
    largest = std::max(largest, cells.cells.size());
    if (cells.cells.size() > D + 1) ++violations;

    // Sampled sign vectors along a long segment must all be exact cells.
    const auto form = *line.as_line();
    Point x(n);
    for (int i = -2000; i <= 2000; ++i) {
      const double param = i * 0.01;
      for (std::size_t c = 0; c < n; ++c) x[c] = form.base[c] + param * form.direction[c];
      const auto w = sign_vector(pvec, x, 1e-9);
      if (w && !std::binary_search(cells.cells.begin(), cells.cells.end(), *w)) ++missed;
    }
  }
  rep.add("at_most_D_plus_1", violations == 0, str(violations) + " violations, largest " + str(largest));
  rep.add("sampled_cells_subset", missed == 0, str(missed) + " sampled sign vectors outside the exact set");
  return rep;
}

VerifyReport verify_mollifier(std::span<const double> delta_grid, std::uint64_t seed, std::size_t configs) {
  VerifyReport rep;
  rep.suite = "mollifier";

  bool certified = true;
  std::string cert_detail;
  for (std::size_t n = 2; n <= 3; ++n)
    for (std::size_t s = 1; s <= 4; ++s) {
      const Embedding emb(n, s);
      for (double delta : delta_grid) {
        try {
          const MollConfig cfg = schedule(delta, emb.bases());
          if (!(cfg.grad_bound * delta < cfg.epsilon)) certified = false;
        } catch (const ScheduleInfeasible& e) {
          certified = false;
          cert_detail = e.what();
        }
      }
    }
  rep.add("schedule_certificate", certified, cert_detail);

  const std::vector<BasisPtr> bases{make_basis(2, 1), make_basis(2, 1)};
  Rng rng(substream(seed, "mollifier-suite"));

  bool in_range = true;
  for (std::size_t t = 0; t < configs; ++t) {
    const double delta = delta_grid[t % delta_grid.size()];
    const MollConfig cfg = schedule(delta, bases, 512, substream(seed, "range", t));
    const std::vector<Polynomial> pvec{random_unit_linear(rng), random_unit_linear(rng)};
    const auto values = mollified_indicators(mollifier_cloud(random_line(2, rng), cfg), 2, pvec, cfg);
    for (double v : values) in_range = in_range && v >= 0.0 && v <= 1.0;
  }
  rep.add("range_0_1", in_range);

  std::size_t separated_failures = 0;
  for (std::size_t t = 0; t < configs; ++t) {
    const double delta = delta_grid[t % delta_grid.size()];
    const MollConfig cfg = schedule(delta, bases, 2048, substream(seed, "separated", t));
    const Point a = uniform_on_sphere(rng, 2);
    const double c = std::uniform_real_distribution<double>(-0.5, 0.5)(rng);
    const std::vector<Polynomial> pvec{random_unit_linear(rng), unit_linear(c, a)};
    // Even trials: a line parallel to Z(P_2) on its positive side, farther
    // than 2 delta away. Odd trials: the line Z(P_2) itself.
    const double gap = t % 2 == 0 ? 2.0 * delta * (1.01 + std::uniform_real_distribution<double>(0, 1)(rng)) : 0.0;
    const Point base{a[0] * (c + gap), a[1] * (c + gap)};
    const VarietySpec line = make_line(base, {-a[1], a[0]});
    const SignVector w{static_cast<std::uint32_t>(2 + (rng() & 1U))};
    if (i_delta(line, pvec, w, cfg) != 0.0) ++separated_failures;
  }
  rep.add("separated_gives_zero", separated_failures == 0, str(separated_failures) + " nonzero values");

  std::size_t witness_failures = 0, witness_checks = 0;
  for (std::size_t t = 0; t < configs; ++t) {
    const std::vector<Polynomial> pvec{random_unit_linear(rng), random_unit_linear(rng)};
    Point q;
    double c = 0.0;
    do {
      q = uniform_in_ball(rng, 2, 1.0);
      c = std::min(std::abs(pvec[0](q)), std::abs(pvec[1](q)));
    } while (c < 0.2);
    const VarietySpec line = make_line(q, uniform_on_sphere(rng, 2));
    const SignVector w = *sign_vector(pvec, q, 0.0);
    for (std::size_t d = 0; d < delta_grid.size(); ++d) {
      const MollConfig cfg = schedule(delta_grid[d], bases, 4096, substream(seed, "witness", t * 64 + d));
      if (!witness_saturates(c, cfg)) continue;
      ++witness_checks;
      if (i_delta(line, pvec, w, cfg) != 1.0) ++witness_failures;
    }
  }
  rep.add("witness_gives_one", witness_failures == 0 && witness_checks > 0,
          str(witness_failures) + " failures in " + str(witness_checks) + " checks");
  return rep;
}

}  // namespace ppart
