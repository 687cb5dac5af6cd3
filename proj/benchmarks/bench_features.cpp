#include <benchmark/benchmark.h>

#include <vector>

#include "normnet/features.hpp"
#include "normnet/rng.hpp"

using namespace normnet;

namespace {

std::vector<double> make_sample(int n) {
  RandomStream rng(7);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& v : x) v = rng.gamma(2.0, 1.0);
  return x;
}

}  // namespace

static void BM_Descriptor(benchmark::State& state) {
  const auto x = make_sample(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(descriptor(x, 0.1));
  }
}
BENCHMARK(BM_Descriptor)->Arg(10)->Arg(100)->Arg(1000);

static void BM_SbnnFeatures(benchmark::State& state) {
  const auto x = make_sample(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sbnn_features(x));
  }
}
BENCHMARK(BM_SbnnFeatures)->Arg(20)->Arg(100);

static void BM_Vasicek(benchmark::State& state) {
  const auto x = make_sample(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(vasicek(x, 5));
  }
}
BENCHMARK(BM_Vasicek)->Arg(100);
