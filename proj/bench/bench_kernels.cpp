// Serial reference vs OpenMP kernels. Set OMP_NUM_THREADS to compare thread counts.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fsmlp/kernels.hpp"
#include "fsmlp/rng.hpp"

using namespace fsmlp;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(r, c);
  for (double& v : m.flat()) v = n(rng);
  return m;
}

template <auto Kernel>
void sammon_sums(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_matrix(n, 16, 1);
  const auto y = random_matrix(n, 4, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(x, y, {}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * (n - 1) / 2));
}

template <auto Kernel>
void gated_sammon_sums(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_matrix(n, 16, 3);
  std::vector<double> gates(16, 0.5);
  std::vector<double> grad(16);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Kernel(x, gates, {}, grad));
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * (n - 1) / 2));
}

template <auto Kernel>
void affine(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto in = random_matrix(n, 64, 4);
  const auto w = random_matrix(32, 64, 5);
  const std::vector<double> b(32, 0.1);
  Matrix out;
  for (auto _ : state) {
    Kernel(in, w, b, out);
    benchmark::ClobberMemory();
  }
}

template <auto Kernel>
void squared_distances(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_matrix(n, 32, 6);
  const auto c = random_matrix(8, 32, 7);
  Matrix out;
  for (auto _ : state) {
    Kernel(x, c, out);
    benchmark::ClobberMemory();
  }
}

}  // namespace

BENCHMARK(sammon_sums<kernels::serial::sammon_sums>)->Name("sammon_sums/serial")->Arg(200)->Arg(1000);
BENCHMARK(sammon_sums<kernels::parallel::sammon_sums>)->Name("sammon_sums/parallel")->Arg(200)->Arg(1000);
BENCHMARK(gated_sammon_sums<kernels::serial::gated_sammon_sums>)->Name("gated_sammon_sums/serial")->Arg(200)->Arg(1000);
BENCHMARK(gated_sammon_sums<kernels::parallel::gated_sammon_sums>)
    ->Name("gated_sammon_sums/parallel")
    ->Arg(200)
    ->Arg(1000);
BENCHMARK(affine<kernels::serial::affine>)->Name("affine/serial")->Arg(1000)->Arg(20000);
BENCHMARK(affine<kernels::parallel::affine>)->Name("affine/parallel")->Arg(1000)->Arg(20000);
BENCHMARK(squared_distances<kernels::serial::squared_distances>)->Name("squared_distances/serial")->Arg(1000)->Arg(50000);
BENCHMARK(squared_distances<kernels::parallel::squared_distances>)
    ->Name("squared_distances/parallel")
    ->Arg(1000)
    ->Arg(50000);

BENCHMARK_MAIN();
