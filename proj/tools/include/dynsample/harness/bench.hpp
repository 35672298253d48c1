#pragma once

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dynsample/distributions.hpp"
#include "dynsample/harness/welford.hpp"

namespace dynsample::harness {

enum class Method { Tree, Rejection, Cr, Oracle };

// "update" on the command line expands to both update variants.
enum class Workload { Extract, UpdateExtracted, UpdateArbitrary, Mixed };

std::string_view to_string(Method m);
std::string_view to_string(Workload w);
std::optional<Method> parse_method(std::string_view name);
// Returns every workload a name stands for ("update" gives two).
std::vector<Workload> parse_workload(std::string_view name);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BenchConfig {
  Method method = Method::Tree;
  RateDistribution dist = RateDistribution::Uniform;
  std::uint64_t n = 1000;
  double ratio = 1e-3;  // min/max, with max = 1
  double c = std::numbers::e;
  std::uint64_t reps = 10'000;
  std::uint64_t ops_per_rep = 1000;
  Workload workload = Workload::Extract;
  std::uint64_t seed = 1;
  std::uint64_t max_n = 1'000'000;

  DistributionSpec spec() const { return {dist, ratio, 1.0}; }
};

void validate(const BenchConfig& cfg);

struct BenchRecord {
  BenchConfig config;
  std::uint64_t op_count = 0;
  WelfordAccumulator time_ns;                 // per-op time, one sample per batch
  std::optional<WelfordAccumulator> attempts; // per extraction, rejection backends
  std::optional<double> predicted_attempts;
  std::string error;                          // non-empty when the cell failed

  bool failed() const { return !error.empty(); }
};

// Builds the sampler from cfg, runs cfg.reps timed batches of
// cfg.ops_per_rep operations and summarises them. The operation sequence
// depends only on cfg.seed.
BenchRecord run_benchmark(const BenchConfig& cfg);

// Cross product of axes; axes left empty in the parsed string inherit the
// base config value.
struct SweepGrid {
  std::vector<Method> methods;
  std::vector<RateDistribution> dists;
  std::vector<Workload> workloads;
  std::vector<std::uint64_t> ns;
  std::vector<double> ratios;
  std::vector<double> cs;
  bool empty = false;  // some axis was given with no values
};

// Grid syntax: ';'-separated "key=v1,v2,..." with keys method, dist,
// workload, n, ratio, c. n also accepts "lo..hi" for decades from lo to hi.
// c accepts "e". The string "default" selects the desk-scale preset, and an
// empty string is the empty grid.
SweepGrid parse_grid(std::string_view text);

// Concrete configs in grid order (method, dist, workload, n, ratio, c).
// The c axis only multiplies composition-rejection cells.
std::vector<BenchConfig> expand(const SweepGrid& grid, const BenchConfig& base);

// Runs every cell; a failing cell yields a record with error set and the
// sweep continues.
std::vector<BenchRecord> sweep(const SweepGrid& grid, const BenchConfig& base,
                               std::ostream* log = nullptr);

std::string csv_header();
std::string csv_row(const BenchRecord& record);
void write_csv(std::ostream& out, const std::vector<BenchRecord>& records);

// Formats a double as the shortest string that round-trips.
std::string format_number(double x);

}  // namespace dynsample::harness
