#include <benchmark/benchmark.h>

#include "selinf/distance.hpp"
#include "selinf/generators.hpp"
#include "selinf/lft.hpp"

namespace {

using namespace selinf;

void BM_LftPrBox(benchmark::State& state) {
  const auto d = gen_prbox();
  for (auto _ : state) benchmark::DoNotOptimize(run_lft(d));
}
BENCHMARK(BM_LftPrBox);

void BM_LftGhz(benchmark::State& state) {
  const auto d = gen_ghz();
  for (auto _ : state) benchmark::DoNotOptimize(run_lft(d));
}
BENCHMARK(BM_LftGhz);

void BM_LftSinglet(benchmark::State& state) {
  const auto d = gen_singlet(parse_angle_spec("0,pi/2,pi/4,3pi/4"), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_lft(d));
}
BENCHMARK(BM_LftSinglet)->Arg(6)->Arg(12)->Arg(15);

// Classical datasets on n inputs with two values and three outcomes each.
void BM_LftClassical(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = gen_classical(make_factorial_design(std::vector<int>(n, 2), std::vector<int>(n, 3)), 11).dataset;
  for (auto _ : state) benchmark::DoNotOptimize(run_lft(d));
  state.counters["columns"] = static_cast<double>(*QIndex(d.design).checked_size());
}
BENCHMARK(BM_LftClassical)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_JdcMatrix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto design = make_factorial_design(std::vector<int>(n, 2), std::vector<int>(n, 2));
  for (auto _ : state) benchmark::DoNotOptimize(build_jdc_matrix(design));
}
BENCHMARK(BM_JdcMatrix)->DenseRange(2, 5);

void BM_IrreducibleSequences(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto design = make_factorial_design(std::vector<int>(n, 3), std::vector<int>(n, 2));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_irreducible_sequences(design));
}
BENCHMARK(BM_IrreducibleSequences)->DenseRange(2, 4);

void BM_ChainTest(benchmark::State& state) {
  const auto design = make_factorial_design({3, 3, 3}, {2, 2, 2});
  const auto d = gen_classical(design, 5).dataset;
  const auto seqs = enumerate_irreducible_sequences(design).sequences;
  const auto order = OrderRelation::by_outcome_index({2, 2, 2});
  for (auto _ : state) benchmark::DoNotOptimize(chain_test(d, order, seqs));
}
BENCHMARK(BM_ChainTest);

}  // namespace

BENCHMARK_MAIN();
