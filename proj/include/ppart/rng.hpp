#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace ppart {

using Rng = std::mt19937_64;

/// Derives an independent seed for a named substream. Every random choice in
/// the library is keyed off one root seed through this function.
std::uint64_t substream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

/// Uniform point in the unit ball of R^dim scaled by `radius`.
std::vector<double> uniform_in_ball(Rng& rng, std::size_t dim, double radius);

/// Uniform point on the unit sphere S^{dim-1}.
std::vector<double> uniform_on_sphere(Rng& rng, std::size_t dim);

/// Volume of the unit ball in R^dim.
double unit_ball_volume(std::size_t dim);

}  // namespace ppart
