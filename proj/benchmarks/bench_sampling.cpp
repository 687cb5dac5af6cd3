#include <benchmark/benchmark.h>

#include "normnet/pearson.hpp"
#include "normnet/rng.hpp"

using namespace normnet;

static void BM_PearsonSamplerBuild(benchmark::State& state) {
  // Type IV builds a CDF inversion table
  const PearsonSpec spec = pearson_from_moments(0, 1, 1.0, 6.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(PearsonSampler(spec));
  }
}
BENCHMARK(BM_PearsonSamplerBuild);

static void BM_PearsonDrawTypeI(benchmark::State& state) {
  PearsonSampler sampler(pearson_from_moments(0, 1, 1.0, 3.5));
  RandomStream rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.draw(rng));
  }
}
BENCHMARK(BM_PearsonDrawTypeI);

static void BM_PearsonDrawTypeIV(benchmark::State& state) {
  PearsonSampler sampler(pearson_from_moments(0, 1, 1.0, 6.0));
  RandomStream rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.draw(rng));
  }
}
BENCHMARK(BM_PearsonDrawTypeIV);

static void BM_NormalDraw(benchmark::State& state) {
  RandomStream rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.normal());
  }
}
BENCHMARK(BM_NormalDraw);

static void BM_GammaDraw(benchmark::State& state) {
  RandomStream rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.gamma(2.0, 1.0));
  }
}
BENCHMARK(BM_GammaDraw);
