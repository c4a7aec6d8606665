#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ppart/error.hpp"
#include "ppart/io.hpp"

using namespace ppart;

namespace {

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string parse_error(std::string_view text) {
  try {
    parse_instance(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("instance parsing") {
  const auto inst = parse_instance(R"({
    "n": 3,
    "varieties": [
      {"kind": "line", "point": [0, 0, 0], "dir": [0, 0, 1], "label": "axis"},
      {"kind": "circle", "center": [0, 0, 1], "radius": 2, "frame": [[1, 0, 0], [0, 1, 0]]},
      {"kind": "kplane", "point": [0, 0, 0], "frame": [[1, 0, 0], [0, 1, 0]]},
      {"kind": "implicit", "k": 1, "polys": [{"coeffs": [1, 1, -1], "exponents": [[2, 0, 0], [0, 2, 0], [0, 0, 0]]},
                                             {"coeffs": [1], "exponents": [[0, 0, 1]]}]}
    ],
    "points": [[1, 2, 3]]
  })");
  CHECK(inst.n == 3);
  REQUIRE(inst.varieties.size() == 4);
  CHECK(inst.labels[0] == "axis");
  CHECK(inst.varieties[2].k == 2);
  CHECK(inst.varieties[3].residual(Point{0.6, 0.8, 0.0}) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(inst.points == std::vector<Point>{{1, 2, 3}});
}

TEST_CASE("parse errors name the field or line") {
  CHECK(parse_error(R"({"n": 2, "varieties": [{"kind": "line", "point": [0, 0], "dir": [1]}]})")
            .find("varieties[0].dir") != std::string::npos);
  CHECK(parse_error(R"({"n": 2, "varieties": [{"kind": "parabola"}]})").find("parabola") != std::string::npos);
  CHECK(parse_error("{\"n\": 2,\n \"varieties\": [}").find("line 2") != std::string::npos);
  CHECK(parse_error(R"({"varieties": []})").find("n") != std::string::npos);
  CHECK(parse_error(R"({"n": 2, "points": [[1, "a"]]})").find("points[0][1]") != std::string::npos);
  CHECK(parse_error(R"({"n": 2, "varieties": [{"kind": "circle", "center": [0, 0], "radius": -1}]})")
            .find("varieties[0]") != std::string::npos);
}

TEST_CASE("counts csv") {
  CHECK(counts_csv(CellCounts(2, {2, 1, 1, 0})) == "w,count\n00,2\n10,1\n01,1\n11,0\n");
}

TEST_CASE("reports re-verify and are byte-identical") {
  const auto inst = parse_instance(R"({"n": 2, "varieties": [
      {"kind": "line", "point": [0, 0], "dir": [1, 0]},
      {"kind": "line", "point": [0, 0], "dir": [0, 1]},
      {"kind": "line", "point": [0.3, 0.1], "dir": [1, 1]}]})");
  SolveConfig cfg;
  cfg.s = 3;
  cfg.seed = 4;
  cfg.restarts = 2;
  cfg.steps_per_stage = 10;
  cfg.delta_grid = {0.5, 0.25};
  cfg.sampling.count = 200;
  cfg.sampling.seed = 77;
  const auto dir = std::filesystem::temp_directory_path() / "ppart_io_test";
  std::filesystem::remove_all(dir);
  const auto rep = partition_varieties(inst.varieties, cfg);
  write_report(rep, cfg.sampling, cfg.seed, dir / "a");
  write_report(partition_varieties(inst.varieties, cfg), cfg.sampling, cfg.seed, dir / "b");
  for (const char* name : {"counts.csv", "report.json", "trace.csv"}) CHECK(read(dir / "a" / name) == read(dir / "b" / name));

  const auto back = parse_report(read(dir / "a" / "report.json"));
  CHECK(back.counts == rep.counts);
  CHECK(counts(inst.varieties, back.pvec, back.sampling) == rep.counts);
  for (std::size_t j = 0; j < rep.pvec.size(); ++j) {
    const auto a = rep.pvec[j].coeffs(), b = back.pvec[j].coeffs();
    CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
  }
  std::filesystem::remove_all(dir);
}
