#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ppart/error.hpp"
#include "ppart/io.hpp"
#include "ppart/mollifier.hpp"
#include "ppart/rng.hpp"
#include "ppart/solver.hpp"
#include "ppart/verify.hpp"

namespace {

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) return ppart::default_delta_grid();
  std::vector<double> grid;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      grid.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ppart::ParseError("--delta-grid: not a number: \"" + item + "\"");
    }
  }
  return grid;
}

int report_suites(const std::vector<ppart::VerifyReport>& reports) {
  bool ok = true;
  for (const auto& r : reports) {
    std::cout << r.to_json();
    ok = ok && r.passed();
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial partitioning experiments"};
  app.require_subcommand(1);

  std::string input, out_dir, objective = "discrete", counting = "exact-lines";
  std::size_t s = 2, restarts = 4, steps = 60;
  std::uint64_t seed = 0;

  auto* partition = app.add_subcommand("partition", "Partition the varieties of an instance");
  partition->add_option("--input", input, "Instance JSON")->required();
  partition->add_option("--s", s, "Number of factors")->required();
  partition->add_option("--seed", seed, "Root seed")->required();
  partition->add_option("--objective", objective, "discrete or smooth")->check(CLI::IsMember({"discrete", "smooth"}));
  partition->add_option("--counting", counting, "exact-lines or sampled")->check(CLI::IsMember({"exact-lines", "sampled"}));
  partition->add_option("--restarts", restarts, "Independent restarts");
  partition->add_option("--steps", steps, "Proposals per delta stage");
  partition->add_option("--out", out_dir, "Output directory")->required();

  auto* points = app.add_subcommand("partition-points", "Bisect the point set of an instance");
  points->add_option("--input", input, "Instance JSON")->required();
  points->add_option("--s", s, "Number of factors")->required();
  points->add_option("--seed", seed, "Root seed")->required();
  points->add_option("--restarts", restarts, "Starts per bisection step");
  points->add_option("--out", out_dir, "Output directory")->required();

  std::size_t seeds = 10;
  auto* borsuk = app.add_subcommand("verify-borsuk", "Model map and continuation checks");
  borsuk->add_option("--s", s, "Number of factors")->required();
  borsuk->add_option("--seed", seed, "Root seed");
  borsuk->add_option("--maps", seeds, "Perturbed maps to continue toward");

  auto* spectrum = app.add_subcommand("verify-spectrum", "Transform identities");
  spectrum->add_option("--s", s, "Number of factors")->required();
  spectrum->add_option("--seed", seed, "Root seed");

  std::size_t degree = 4, trials = 1000, dim = 2;
  auto* lines = app.add_subcommand("bench-line-cells", "Cells entered by random lines");
  lines->add_option("--D", degree, "Product degree")->required();
  lines->add_option("--trials", trials, "Random (line, factors) pairs")->required();
  lines->add_option("--n", dim, "Ambient dimension");
  lines->add_option("--seed", seed, "Root seed");

  std::string grid;
  auto* moll = app.add_subcommand("verify-mollifier", "Mollified indicator properties");
  moll->add_option("--delta-grid", grid, "Comma-separated deltas (default 2^-1 .. 2^-12)");
  moll->add_option("--seed", seed, "Root seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (partition->parsed() || points->parsed()) {
      const ppart::Instance inst = ppart::load_instance(input);
      if (partition->parsed()) {
        std::string unsupported;
        for (std::size_t i = 0; i < inst.varieties.size(); ++i)
          if (!inst.varieties[i].sampler) {
            unsupported += " varieties[" + std::to_string(i) + "] (implicit";
            if (!inst.labels[i].empty()) unsupported += " \"" + inst.labels[i] + "\"";
            unsupported += ")";
          }
        if (!unsupported.empty())
          throw ppart::UnsupportedVariety("cannot partition varieties without a sampler:" + unsupported);
      }
      ppart::SolveConfig cfg;
      cfg.n = inst.n;
      cfg.s = s;
      cfg.seed = seed;
      cfg.restarts = restarts;
      cfg.steps_per_stage = steps;
      cfg.objective = objective == "smooth" ? ppart::Objective::smooth : ppart::Objective::discrete;
      cfg.sampling.seed = ppart::substream(seed, "sampling");
      cfg.sampling.method = counting == "sampled" ? ppart::CountMethod::sampled : ppart::CountMethod::exact_lines;
      const auto report =
          partition->parsed() ? ppart::partition_varieties(inst.varieties, cfg) : ppart::partition_points(inst.points, cfg);
      ppart::write_report(report, cfg.sampling, seed, out_dir);
      std::cout << "max_count " << report.max_count << " bound_ratio " << report.bound_ratio << " D "
                << report.total_degree << "\n";
      return 0;
    }
    if (borsuk->parsed()) return report_suites({ppart::verify_borsuk({s, seed, seeds, 0.3})});
    if (spectrum->parsed()) {
      std::vector<ppart::VerifyReport> reps{ppart::verify_spectrum(s, seed)};
      if (s <= 4) reps.push_back(ppart::verify_flip_chain(s, 20, seed));
      return report_suites(reps);
    }
    if (lines->parsed()) return report_suites({ppart::bench_line_cells(degree, trials, dim, seed)});
    if (moll->parsed()) {
      const auto deltas = parse_grid(grid);
      return report_suites({ppart::verify_mollifier(deltas, seed)});
    }
  } catch (const ppart::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
