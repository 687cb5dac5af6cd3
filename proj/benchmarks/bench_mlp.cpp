#include <benchmark/benchmark.h>

#include <vector>

#include "normnet/mlp.hpp"
#include "normnet/rng.hpp"

using namespace normnet;

namespace {

Eigen::MatrixXd random_batch(int dim, int n) {
  RandomStream rng(3);
  Eigen::MatrixXd x(dim, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < dim; ++r) x(r, c) = rng.normal();
  }
  return x;
}

}  // namespace

static void BM_ForwardBatch(benchmark::State& state) {
  NetworkConfig cfg;
  cfg.hidden_layers = {100, 10};
  const Network net = init_network(cfg, 16);
  const Eigen::MatrixXd X = random_batch(16, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_batch(net, X));
  }
}
BENCHMARK(BM_ForwardBatch)->Arg(1)->Arg(128)->Arg(1024);

static void BM_LossAndGradient(benchmark::State& state) {
  NetworkConfig cfg;
  cfg.hidden_layers = {100, 10};
  const Network net = init_network(cfg, 16);
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd X = random_batch(16, n);
  std::vector<int> y(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = i % 2;
  Gradients g;
  for (auto _ : state) {
    benchmark::DoNotOptimize(loss_and_gradient(net, X, y, &g));
  }
}
BENCHMARK(BM_LossAndGradient)->Arg(128);
