#include "ppart/cells.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ppart/error.hpp"
#include "ppart/univariate.hpp"

namespace ppart {

namespace {

void check_s(std::size_t s) {
  if (s < 1 || s > kMaxFactors) throw InvalidArgument("cell tables need 1 <= s <= 20");
}

}  // namespace

CellCounts::CellCounts(std::size_t s) : s_(s) {
  check_s(s);
  values_.assign(std::size_t{1} << s, 0);
}

CellCounts::CellCounts(std::size_t s, std::vector<std::int64_t> values)
    : s_(s), values_(std::move(values)) {
  check_s(s);
  if (values_.size() != (std::size_t{1} << s)) throw DimensionMismatch("CellCounts: need 2^s entries");
}

std::int64_t CellCounts::max() const { return *std::max_element(values_.begin(), values_.end()); }

std::int64_t CellCounts::total() const {
  return std::accumulate(values_.begin(), values_.end(), std::int64_t{0});
}

std::optional<SignVector> sign_vector(std::span<const Polynomial> pvec, std::span<const double> x,
                                      double tau) {
  if (pvec.size() > kMaxFactors) throw InvalidArgument("sign_vector: too many factors");
  SignVector w;
  for (std::size_t j = 0; j < pvec.size(); ++j) {
    const double v = pvec[j](x);
    if (!(std::abs(v) > tau)) return std::nullopt;
    if (v < 0) w.bits |= 1U << j;
  }
  return w;
}

std::size_t sample_count(const SamplingConfig& cfg, std::size_t k, std::size_t D) {
  if (cfg.count > 0) return cfg.count;
  if (k == 0) return 1;
  const double per_dim = 64.0 * (cfg.radius * static_cast<double>(D) + 1.0);
  return static_cast<std::size_t>(std::min(1e5, std::pow(per_dim, static_cast<double>(k))));
}

std::size_t product_degree(std::span<const Polynomial> pvec) {
  std::size_t d = 0;
  for (const auto& p : pvec) d += p.degree();
  return d;
}

std::vector<bool> cells_entered(const VarietySpec& gamma, std::span<const Polynomial> pvec,
                                const SamplingConfig& cfg) {
  const std::size_t s = pvec.size();
  check_s(s);
  std::vector<bool> entered(std::size_t{1} << s, false);
  if (cfg.method == CountMethod::exact_lines && gamma.as_line()) {
    for (SignVector w : cells_entered_line(gamma, pvec).cells) entered[w.bits] = true;
    return entered;
  }
  const std::size_t count = sample_count(cfg, gamma.k, product_degree(pvec));
  for (const auto& x : sample_in_ball(gamma, cfg.radius, count, cfg.seed))
    if (auto w = sign_vector(pvec, x, cfg.tau)) entered[w->bits] = true;
  return entered;
}

int indicator(const VarietySpec& gamma, std::span<const Polynomial> pvec, SignVector w,
              const SamplingConfig& cfg) {
  SamplingConfig sampled = cfg;
  sampled.method = CountMethod::sampled;
  auto entered = cells_entered(gamma, pvec, sampled);
  if (w.bits >= entered.size()) throw InvalidArgument("indicator: sign vector out of range");
  return entered[w.bits] ? 1 : 0;
}

CellCounts counts(std::span<const VarietySpec> varieties, std::span<const Polynomial> pvec,
                  const SamplingConfig& cfg) {
  CellCounts table(pvec.size());
  for (const auto& gamma : varieties) {
    auto entered = cells_entered(gamma, pvec, cfg);
    for (std::uint32_t w = 0; w < entered.size(); ++w)
      if (entered[w]) table[SignVector{w}] += 1;
  }
  return table;
}

LineCells cells_entered_line(const VarietySpec& line, std::span<const Polynomial> pvec) {
  auto form = line.as_line();
  if (!form) throw InvalidArgument("cells_entered_line: variety is not a line");
  const std::size_t s = pvec.size();
  check_s(s);

  std::vector<std::vector<double>> restricted;
  restricted.reserve(s);
  std::vector<double> breaks;
  for (const auto& p : pvec) {
    auto q = restrict_to_line(p, form->base, form->direction);
    const double scale = std::max(1.0, p.coeff_norm());
    const bool vanishes = std::all_of(q.begin(), q.end(), [&](double c) { return std::abs(c) < 1e-12 * scale; });
    if (vanishes) return LineCells{{}, true};
    auto roots = sign_change_roots(q);
    breaks.insert(breaks.end(), roots.begin(), roots.end());
    restricted.push_back(std::move(q));
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  // One representative interval per gap between consecutive sign changes.
  std::vector<std::pair<double, double>> intervals;
  if (breaks.empty()) {
    intervals.emplace_back(-1.0, 1.0);
  } else {
    const double lead = std::max(1.0, std::abs(breaks.front()));
    const double tail = std::max(1.0, std::abs(breaks.back()));
    intervals.emplace_back(breaks.front() - lead, breaks.front());
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) intervals.emplace_back(breaks[i], breaks[i + 1]);
    intervals.emplace_back(breaks.back(), breaks.back() + tail);
  }

  std::vector<SignVector> cells;
  for (const auto& [lo, hi] : intervals) {
    SignVector w;
    for (std::size_t j = 0; j < s; ++j) {
      // The sign is constant on the open interval apart from even-order
      // touching roots; take the probe of largest magnitude.
      double best = 0.0;
      for (double f : {0.5, 0.25, 0.75}) {
        const double v = horner(restricted[j], lo + f * (hi - lo));
        if (std::abs(v) > std::abs(best)) best = v;
      }
      if (!std::isfinite(best)) throw NumericalFailure("cells_entered_line: non-finite restriction value");
      if (best < 0) w.bits |= 1U << j;
    }
    cells.push_back(w);
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return LineCells{std::move(cells), false};
}

}  // namespace ppart
