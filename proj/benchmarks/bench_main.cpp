#include <benchmark/benchmark.h>

#include "lpreg/decompose.hpp"
#include "lpreg/oracle.hpp"
#include "lpreg/random.hpp"
#include "lpreg/regularity.hpp"

namespace {

lpreg::BinaryMatrix random_matrix(int n, double density, std::uint64_t seed) {
  return lpreg::generate_w_random(lpreg::WGrid::flat(), n, density, seed).matrix;
}

lpreg::RealMatrix density_residual(const lpreg::BinaryMatrix& f) {
  return lpreg::residual(f, lpreg::conditional_expectation(f, lpreg::RectPartition::trivial(f.rows(), f.cols())));
}

void BM_CutNormExact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const lpreg::RealMatrix g = density_residual(random_matrix(n, 0.3, 11));
  for (auto _ : state) benchmark::DoNotOptimize(lpreg::cut_norm_exact(g).value);
  state.SetComplexityN(n);
}
BENCHMARK(BM_CutNormExact)->DenseRange(8, 18, 2)->Unit(benchmark::kMillisecond);

void BM_OracleHeuristic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const lpreg::RealMatrix g = density_residual(random_matrix(n, 0.3, 11));
  const lpreg::OracleConfig cfg = lpreg::OracleConfig::heuristic(5);
  for (auto _ : state) benchmark::DoNotOptimize(lpreg::oracle_heuristic(g, cfg).scaled_value);
}
BENCHMARK(BM_OracleHeuristic)->RangeMultiplier(2)->Range(8, 128)->Unit(benchmark::kMillisecond);

// Block matrix with a dense top-left quarter, decomposed with the exact oracle.
void BM_DecomposeBlock(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<lpreg::BinaryMatrix::Entry> ones;
  for (int i = 0; i < n / 2; ++i)
    for (int j = 0; j < n / 2; ++j) ones.emplace_back(i, j);
  const lpreg::BinaryMatrix f(n, n, std::move(ones));
  const lpreg::DecomposeParams params = lpreg::synthesize_params(0.3, 4.0, 2.0, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(lpreg::decompose(f, params, lpreg::OracleConfig::exact()).partition.size());
}
BENCHMARK(BM_DecomposeBlock)->DenseRange(8, 16, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
