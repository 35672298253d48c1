#include "dynsample/harness/bench.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>
#include <type_traits>

#include "dynsample/analytics.hpp"
#include "dynsample/cr_sampler.hpp"
#include "dynsample/oracle_sampler.hpp"
#include "dynsample/rejection_sampler.hpp"
#include "dynsample/tree_sampler.hpp"

namespace dynsample::harness {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = text.find(sep, start);
    parts.push_back(text.substr(start, end == std::string_view::npos ? end : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s, std::string_view what) {
  s = trim(s);
  if (s == "e") return std::numbers::e;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("cannot parse " + std::string(what) + " value '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t parse_count(std::string_view s) {
  const double v = parse_double(s, "n");
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e15) {
    throw ConfigError("n must be a positive integer, got '" + std::string(s) + "'");
  }
  return static_cast<std::uint64_t>(v);
}

// Per-op state shared by every backend.
template <class S>
struct Workbench {
  S& sampler;
  std::vector<OutcomeHandle>& handles;
  const BenchConfig& cfg;
  DistributionSpec spec;
  RandomSource& rng;
  ExtractStats stats;

  // Rejection trials plus scanned groups of one extraction.
  std::uint64_t extract() {
    const std::uint64_t before = stats.attempts + stats.scan_steps;
    sampler.extract(rng, stats);
    return stats.attempts + stats.scan_steps - before;
  }

  std::uint64_t update_extracted() {
    const std::uint64_t before = stats.attempts + stats.scan_steps;
    const Selection s = sampler.extract(rng, stats);
    sampler.update(s.handle, sample_rate(spec, rng));
    return stats.attempts + stats.scan_steps - before;
  }

  void update_arbitrary() {
    const OutcomeHandle h = handles[rng.below(handles.size())];
    sampler.update(h, sample_rate(spec, rng));
  }
};

template <class S>
void populate(S& sampler, std::vector<OutcomeHandle>& handles, const DistributionSpec& spec,
              std::uint64_t n, RandomSource& rng) {
  handles.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) handles.push_back(sampler.add({i}, sample_rate(spec, rng)));
}

template <class S>
BenchRecord measure(S& sampler, std::vector<OutcomeHandle>& handles, const BenchConfig& cfg,
                    RandomSource& rng) {
  BenchRecord record;
  record.config = cfg;
  Workbench<S> bench{sampler, handles, cfg, cfg.spec(), rng, {}};

  const bool extracts = cfg.workload != Workload::UpdateArbitrary;
  const bool counts_attempts =
      extracts && (cfg.method == Method::Rejection || cfg.method == Method::Cr);
  WelfordAccumulator attempts;
  std::vector<std::uint64_t> batch_attempts;
  batch_attempts.reserve(cfg.ops_per_rep);

  for (std::uint64_t rep = 0; rep < cfg.reps; ++rep) {
    batch_attempts.clear();
    const auto start = Clock::now();
    switch (cfg.workload) {
      case Workload::Extract:
        for (std::uint64_t k = 0; k < cfg.ops_per_rep; ++k) batch_attempts.push_back(bench.extract());
        break;
      case Workload::UpdateExtracted:
        for (std::uint64_t k = 0; k < cfg.ops_per_rep; ++k) {
          batch_attempts.push_back(bench.update_extracted());
        }
        break;
      case Workload::UpdateArbitrary:
        for (std::uint64_t k = 0; k < cfg.ops_per_rep; ++k) bench.update_arbitrary();
        break;
      case Workload::Mixed:
        for (std::uint64_t k = 0; k < cfg.ops_per_rep; ++k) {
          if (k % 2 == 0) {
            batch_attempts.push_back(bench.extract());
          } else {
            bench.update_arbitrary();
          }
        }
        break;
    }
    const auto stop = Clock::now();
    const double ns = std::chrono::duration<double, std::nano>(stop - start).count();
    record.time_ns.push(ns / static_cast<double>(cfg.ops_per_rep));
    if (counts_attempts) {
      for (std::uint64_t a : batch_attempts) attempts.push(static_cast<double>(a));
    }
  }

  record.op_count = cfg.reps * cfg.ops_per_rep;
  if (counts_attempts) {
    record.attempts = attempts;
  }
  // Re-rating the extracted outcome skews the population toward low rates,
  // so the analytic law only predicts the other workloads.
  if (counts_attempts && cfg.workload != Workload::UpdateExtracted) {
    const DistributionSpec spec = cfg.spec();
    record.predicted_attempts = cfg.method == Method::Rejection
                                    ? analytics::rejection_cost(spec).expected_total
                                    : analytics::cr_cost(spec, cfg.c).expected_total;
  }
  return record;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Tree: return "tree";
    case Method::Rejection: return "rejection";
    case Method::Cr: return "cr";
    case Method::Oracle: return "oracle";
  }
  return "?";
}

std::string_view to_string(Workload w) {
  switch (w) {
    case Workload::Extract: return "extract";
    case Workload::UpdateExtracted: return "update-extracted";
    case Workload::UpdateArbitrary: return "update-arbitrary";
    case Workload::Mixed: return "mixed";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::Tree, Method::Rejection, Method::Cr, Method::Oracle}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::vector<Workload> parse_workload(std::string_view name) {
  if (name == "update") return {Workload::UpdateExtracted, Workload::UpdateArbitrary};
  for (Workload w : {Workload::Extract, Workload::UpdateExtracted, Workload::UpdateArbitrary,
                     Workload::Mixed}) {
    if (to_string(w) == name) return {w};
  }
  return {};
}

void validate(const BenchConfig& cfg) {
  if (cfg.n < 1) throw ConfigError("n must be >= 1");
  if (cfg.n > cfg.max_n) {
    throw ConfigError("n = " + std::to_string(cfg.n) + " exceeds the cap of " +
                      std::to_string(cfg.max_n) + " (raise --max-n)");
  }
  if (cfg.reps < 2) throw ConfigError("reps must be >= 2");
  if (cfg.ops_per_rep < 1) throw ConfigError("ops must be >= 1");
  if (!(cfg.ratio > 0.0 && cfg.ratio < 1.0)) throw ConfigError("ratio must lie in (0, 1)");
  if (cfg.method == Method::Cr && !(cfg.c > 1.0 && std::isfinite(cfg.c))) {
    throw ConfigError("group constant c must be > 1");
  }
}

BenchRecord run_benchmark(const BenchConfig& cfg) {
  validate(cfg);
  RandomSource rng(cfg.seed);
  const DistributionSpec spec = cfg.spec();
  std::vector<OutcomeHandle> handles;

  switch (cfg.method) {
    case Method::Tree: {
      std::vector<WeightedOutcome> outcomes(cfg.n);
      for (std::uint64_t i = 0; i < cfg.n; ++i) outcomes[i] = {{i}, sample_rate(spec, rng)};
      auto [tree, built] = TreeSampler::build(outcomes);
      handles = std::move(built);
      return measure(tree, handles, cfg, rng);
    }
    case Method::Rejection: {
      RejectionSampler sampler(spec.max);
      populate(sampler, handles, spec, cfg.n, rng);
      return measure(sampler, handles, cfg, rng);
    }
    case Method::Cr: {
      CrSampler sampler(spec.max, cfg.c);
      populate(sampler, handles, spec, cfg.n, rng);
      return measure(sampler, handles, cfg, rng);
    }
    case Method::Oracle: {
      OracleSampler sampler;
      populate(sampler, handles, spec, cfg.n, rng);
      return measure(sampler, handles, cfg, rng);
    }
  }
  throw ConfigError("unknown method");
}

SweepGrid parse_grid(std::string_view text) {
  SweepGrid grid;
  text = trim(text);
  if (text.empty()) {
    grid.empty = true;
    return grid;
  }
  if (text == "default") {
    grid.methods = {Method::Tree, Method::Rejection, Method::Cr};
    grid.dists = {RateDistribution::Uniform, RateDistribution::LogUniform};
    grid.workloads = {Workload::Extract, Workload::UpdateExtracted, Workload::UpdateArbitrary};
    grid.ns = {10, 100, 1000, 10'000, 100'000, 1'000'000};
    grid.ratios = {1e-1, 1e-2, 1e-3};
    return grid;
  }

  for (std::string_view clause : split(text, ';')) {
    clause = trim(clause);
    if (clause.empty()) continue;
    const std::size_t eq = clause.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("grid clause '" + std::string(clause) + "' lacks '='");
    }
    const std::string_view key = trim(clause.substr(0, eq));
    const std::string_view values = trim(clause.substr(eq + 1));
    if (values.empty()) {
      grid.empty = true;
      continue;
    }
    for (std::string_view raw : split(values, ',')) {
      const std::string_view v = trim(raw);
      if (key == "method") {
        const auto m = parse_method(v);
        if (!m) throw ConfigError("unknown method '" + std::string(v) + "'");
        grid.methods.push_back(*m);
      } else if (key == "dist") {
        const auto d = parse_distribution(v);
        if (!d) throw ConfigError("unknown distribution '" + std::string(v) + "'");
        grid.dists.push_back(*d);
      } else if (key == "workload") {
        const auto ws = parse_workload(v);
        if (ws.empty()) throw ConfigError("unknown workload '" + std::string(v) + "'");
        grid.workloads.insert(grid.workloads.end(), ws.begin(), ws.end());
      } else if (key == "n") {
        const std::size_t dots = v.find("..");
        if (dots == std::string_view::npos) {
          grid.ns.push_back(parse_count(v));
        } else {
          const std::uint64_t lo = parse_count(v.substr(0, dots));
          const std::uint64_t hi = parse_count(v.substr(dots + 2));
          for (std::uint64_t x = lo; x <= hi; x *= 10) grid.ns.push_back(x);
        }
      } else if (key == "ratio") {
        grid.ratios.push_back(parse_double(v, "ratio"));
      } else if (key == "c") {
        grid.cs.push_back(parse_double(v, "c"));
      } else {
        throw ConfigError("unknown grid key '" + std::string(key) + "'");
      }
    }
  }
  return grid;
}

std::vector<BenchConfig> expand(const SweepGrid& grid, const BenchConfig& base) {
  std::vector<BenchConfig> out;
  if (grid.empty) return out;
  auto or_base = [](const auto& axis, auto value) {
    using T = typename std::decay_t<decltype(axis)>::value_type;
    return axis.empty() ? std::vector<T>{value} : axis;
  };
  const auto methods = or_base(grid.methods, base.method);
  const auto dists = or_base(grid.dists, base.dist);
  const auto workloads = or_base(grid.workloads, base.workload);
  const auto ns = or_base(grid.ns, base.n);
  const auto ratios = or_base(grid.ratios, base.ratio);
  const auto cs = or_base(grid.cs, base.c);

  for (Method m : methods) {
    for (RateDistribution d : dists) {
      for (Workload w : workloads) {
        for (std::uint64_t n : ns) {
          for (double ratio : ratios) {
            const std::size_t c_count = m == Method::Cr ? cs.size() : 1;
            for (std::size_t ci = 0; ci < c_count; ++ci) {
              BenchConfig cfg = base;
              cfg.method = m;
              cfg.dist = d;
              cfg.workload = w;
              cfg.n = n;
              cfg.ratio = ratio;
              cfg.c = m == Method::Cr ? cs[ci] : base.c;
              out.push_back(cfg);
            }
          }
        }
      }
    }
  }
  return out;
}

std::vector<BenchRecord> sweep(const SweepGrid& grid, const BenchConfig& base, std::ostream* log) {
  std::vector<BenchRecord> records;
  for (const BenchConfig& cfg : expand(grid, base)) {
    try {
      records.push_back(run_benchmark(cfg));
    } catch (const std::exception& e) {
      BenchRecord failed;
      failed.config = cfg;
      failed.error = e.what();
      if (log) {
        *log << "cell " << to_string(cfg.method) << '/' << to_string(cfg.dist) << "/n=" << cfg.n
             << "/ratio=" << format_number(cfg.ratio) << " failed: " << e.what() << '\n';
      }
      records.push_back(std::move(failed));
    }
  }
  return records;
}

std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ec == std::errc{} ? ptr : buf);
}

std::string csv_header() {
  return "method,dist,n,ratio,c,workload,op_count,mean_ns,stddev_ns,attempts_mean,"
         "attempts_stddev,predicted_attempts,seed,rng_name";
}

std::string csv_row(const BenchRecord& r) {
  const BenchConfig& cfg = r.config;
  std::ostringstream row;
  row << to_string(cfg.method) << ',' << to_string(cfg.dist) << ',' << cfg.n << ','
      << format_number(cfg.ratio) << ',';
  if (cfg.method == Method::Cr) row << format_number(cfg.c);
  row << ',' << to_string(cfg.workload) << ',';
  if (!r.failed()) {
    row << r.op_count << ',' << format_number(r.time_ns.mean) << ','
        << format_number(r.time_ns.stddev()) << ',';
    if (r.attempts) {
      row << format_number(r.attempts->mean) << ',' << format_number(r.attempts->stddev());
    } else {
      row << ',';
    }
    row << ',';
    if (r.predicted_attempts) row << format_number(*r.predicted_attempts);
  } else {
    row << ",,,,,";
  }
  row << ',' << cfg.seed << ',' << RandomSource::kName;
  return row.str();
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << csv_header() << '\n';
  for (const BenchRecord& r : records) out << csv_row(r) << '\n';
}

}  // namespace dynsample::harness
