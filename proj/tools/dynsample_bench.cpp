// Benchmark driver: times extraction and update workloads of the sampler
// backends and writes one CSV row per configuration.

#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include "CLI11.hpp"
#include "dynsample/harness/bench.hpp"

namespace h = dynsample::harness;

int main(int argc, char** argv) {
  CLI::App app{"Dynamic weighted sampling benchmark"};

  std::string method = "tree";
  std::string dist = "uniform";
  std::string workload = "extract";
  std::string out_path;
  std::string grid_text;
  h::BenchConfig base;

  app.add_option("--method", method, "Backend")
      ->check(CLI::IsMember({"tree", "rejection", "cr", "oracle"}))
      ->capture_default_str();
  app.add_option("--dist", dist, "Rate distribution")
      ->check(CLI::IsMember({"uniform", "loguniform"}))
      ->capture_default_str();
  app.add_option("--n", base.n, "Number of outcomes")->capture_default_str();
  app.add_option("--ratio", base.ratio, "min/max in (0,1), with max = 1")->capture_default_str();
  app.add_option("--c", base.c, "Group constant for cr (\"e\" accepted)")
      ->transform([](std::string v) { return v == "e" ? h::format_number(std::numbers::e) : v; })
      ->capture_default_str();
  app.add_option("--reps", base.reps, "Timed batches")->capture_default_str();
  app.add_option("--ops", base.ops_per_rep, "Operations per batch")->capture_default_str();
  app.add_option("--workload", workload,
                 "extract | update | update-extracted | update-arbitrary | mixed")
      ->check(CLI::IsMember({"extract", "update", "update-extracted", "update-arbitrary", "mixed"}))
      ->capture_default_str();
  app.add_option("--seed", base.seed, "RNG seed")->capture_default_str();
  app.add_option("--max-n", base.max_n, "Refuse configurations with more outcomes")
      ->capture_default_str();
  app.add_option("--out", out_path, "CSV output path (default: stdout)");
  auto* sweep_opt = app.add_option(
      "--sweep", grid_text,
      "Grid spec, e.g. \"method=tree,cr;n=1e2..1e6;ratio=0.001\", or \"default\"");

  CLI11_PARSE(app, argc, argv);

  try {
    base.method = *h::parse_method(method);
    base.dist = *dynsample::parse_distribution(dist);
    const auto workloads = h::parse_workload(workload);
    base.workload = workloads.front();

    h::SweepGrid grid;
    if (sweep_opt->count() > 0) {
      grid = h::parse_grid(grid_text);
    } else {
      grid.workloads = workloads;
    }
    if (!grid.empty) {
      for (const h::BenchConfig& cfg : h::expand(grid, base)) h::validate(cfg);
    }

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) {
        std::cerr << "cannot open " << out_path << '\n';
        return 2;
      }
      out = &file;
    }

    const auto records = h::sweep(grid, base, &std::cerr);
    h::write_csv(*out, records);
    for (const auto& r : records) {
      if (r.failed()) return 3;
    }
  } catch (const h::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
