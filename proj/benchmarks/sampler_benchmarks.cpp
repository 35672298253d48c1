#include <benchmark/benchmark.h>

#include <vector>

#include "dynsample/cr_sampler.hpp"
#include "dynsample/distributions.hpp"
#include "dynsample/rejection_sampler.hpp"
#include "dynsample/tree_sampler.hpp"

namespace {

using namespace dynsample;

constexpr DistributionSpec kUniform{RateDistribution::Uniform, 1e-3, 1.0};
constexpr DistributionSpec kLogUniform{RateDistribution::LogUniform, 1e-3, 1.0};

template <class S>
S make_sampler();

template <>
TreeSampler make_sampler<TreeSampler>() { return {}; }
template <>
RejectionSampler make_sampler<RejectionSampler>() { return RejectionSampler(1.0); }
template <>
CrSampler make_sampler<CrSampler>() { return CrSampler(1.0, 2.0); }

template <class S>
std::vector<OutcomeHandle> fill(S& s, const DistributionSpec& spec, std::int64_t n,
                                RandomSource& rng) {
  std::vector<OutcomeHandle> handles;
  handles.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    handles.push_back(s.add({static_cast<std::uint64_t>(i)}, sample_rate(spec, rng)));
  }
  return handles;
}

template <class S, const DistributionSpec& Spec>
void BM_Extract(benchmark::State& state) {
  RandomSource rng(42);
  S sampler = make_sampler<S>();
  fill(sampler, Spec, state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.extract(rng));
}

template <class S, const DistributionSpec& Spec>
void BM_UpdateArbitrary(benchmark::State& state) {
  RandomSource rng(42);
  S sampler = make_sampler<S>();
  const auto handles = fill(sampler, Spec, state.range(0), rng);
  for (auto _ : state) {
    sampler.update(handles[rng.below(handles.size())], sample_rate(Spec, rng));
  }
}

#define DYNSAMPLE_BENCH(fn, S, spec) \
  BENCHMARK_TEMPLATE(fn, S, spec)->RangeMultiplier(10)->Range(100, 1'000'000)

DYNSAMPLE_BENCH(BM_Extract, TreeSampler, kUniform);
DYNSAMPLE_BENCH(BM_Extract, RejectionSampler, kUniform);
DYNSAMPLE_BENCH(BM_Extract, CrSampler, kUniform);
DYNSAMPLE_BENCH(BM_Extract, TreeSampler, kLogUniform);
DYNSAMPLE_BENCH(BM_Extract, RejectionSampler, kLogUniform);
DYNSAMPLE_BENCH(BM_Extract, CrSampler, kLogUniform);
DYNSAMPLE_BENCH(BM_UpdateArbitrary, TreeSampler, kUniform);
DYNSAMPLE_BENCH(BM_UpdateArbitrary, RejectionSampler, kUniform);
DYNSAMPLE_BENCH(BM_UpdateArbitrary, CrSampler, kUniform);

}  // namespace

BENCHMARK_MAIN();
