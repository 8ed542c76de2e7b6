// Serial reference vs OpenMP kernels on qubit registers.
#include <benchmark/benchmark.h>

#include "icsem/kernels.hpp"
#include "icsem/random.hpp"

using namespace icsem;

namespace {

SystemDims qubits(std::size_t n) { return SystemDims(std::vector<std::size_t>(n, 2)); }

Permutation reversed(std::size_t n) {
  Permutation p(n);
  for (std::size_t k = 0; k < n; ++k) p[k] = n - 1 - k;
  return p;
}

template <auto Kernel>
void bm_matmul(benchmark::State& state) {
  random::Rng rng(1);
  const std::size_t d = std::size_t(1) << state.range(0);
  const ComplexMatrix a = random::gaussian_matrix(d, d, rng), b = random::gaussian_matrix(d, d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(a, b));
}

template <auto Kernel>
void bm_kron(benchmark::State& state) {
  random::Rng rng(2);
  const std::size_t d = std::size_t(1) << state.range(0);
  const ComplexMatrix a = random::gaussian_matrix(d, d, rng), b = random::gaussian_matrix(d, d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(a, b));
}

template <auto Kernel>
void bm_permute(benchmark::State& state) {
  random::Rng rng(3);
  const std::size_t n = state.range(0);
  const SystemDims dims = qubits(n);
  const ComplexMatrix m = random::gaussian_matrix(dims.total(), dims.total(), rng);
  const Permutation p = reversed(n);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(m, dims, dims, p, p));
}

template <auto Kernel>
void bm_partial_trace(benchmark::State& state) {
  random::Rng rng(4);
  const std::size_t n = state.range(0);
  const SystemDims dims = qubits(n);
  const ComplexMatrix m = random::gaussian_matrix(dims.total(), dims.total(), rng);
  const std::vector<std::size_t> traced{0, n - 1};
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(m, dims, traced));
}

}  // namespace

BENCHMARK(bm_matmul<serial::matmul>)->DenseRange(5, 8);
BENCHMARK(bm_matmul<icsem::matmul>)->DenseRange(5, 8);
BENCHMARK(bm_kron<serial::kron>)->DenseRange(3, 5);
BENCHMARK(bm_kron<icsem::kron>)->DenseRange(3, 5);
BENCHMARK(bm_permute<serial::permute_factors>)->DenseRange(6, 10, 2);
BENCHMARK(bm_permute<icsem::permute_factors>)->DenseRange(6, 10, 2);
BENCHMARK(bm_partial_trace<serial::partial_trace>)->DenseRange(6, 10, 2);
BENCHMARK(bm_partial_trace<icsem::partial_trace>)->DenseRange(6, 10, 2);

BENCHMARK_MAIN();
