#include "ppart/rng.hpp"

#include <cmath>
#include <numbers>

namespace ppart {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t substream(std::uint64_t seed, std::string_view name, std::uint64_t index) {
  // FNV-1a over the name, then mixed with the seed and index.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(seed ^ h) + index);
}

std::vector<double> uniform_on_sphere(Rng& rng, std::size_t dim) {
  std::normal_distribution<double> normal;
  std::vector<double> v(dim);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (auto& c : v) {
      c = normal(rng);
      norm2 += c * c;
    }
  } while (norm2 < 1e-300);
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& c : v) c *= inv;
  return v;
}

std::vector<double> uniform_in_ball(Rng& rng, std::size_t dim, double radius) {
  if (dim == 0) return {};
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto v = uniform_on_sphere(rng, dim);
  const double r = radius * std::pow(unif(rng), 1.0 / static_cast<double>(dim));
  for (auto& c : v) c *= r;
  return v;
}

double unit_ball_volume(std::size_t dim) {
  const double m = static_cast<double>(dim);
  return std::pow(std::numbers::pi, m / 2.0) / std::tgamma(m / 2.0 + 1.0);
}

}  // namespace ppart
