#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ppart/solver.hpp"
#include "ppart/varieties.hpp"

namespace ppart {

struct Instance {
  std::size_t n = 0;
  std::vector<VarietySpec> varieties;
  std::vector<std::string> labels;
  std::vector<Point> points;
};

/// JSON instance: {"n": 2, "varieties": [...], "points": [[x, y], ...]}.
/// Variety kinds: line {point, dir}, circle {center, radius, frame?},
/// kplane {point, frame}, implicit {k, polys: [{coeffs, exponents}]}.
/// Throws ParseError naming the line or the offending field.
Instance parse_instance(std::string_view text);
Instance load_instance(const std::filesystem::path& path);

std::string counts_csv(const CellCounts& counts);
std::string trace_csv(const PartitionReport& report);
/// report.json; pvec coefficients round-trip exactly.
std::string report_json(const PartitionReport& report, const SamplingConfig& sampling, std::uint64_t seed);

/// Writes counts.csv, report.json and trace.csv into dir.
void write_report(const PartitionReport& report, const SamplingConfig& sampling, std::uint64_t seed,
                  const std::filesystem::path& dir);

struct SerializedReport {
  std::vector<Polynomial> pvec;
  CellCounts counts{1};
  SamplingConfig sampling;
};
SerializedReport parse_report(std::string_view json);

}  // namespace ppart
