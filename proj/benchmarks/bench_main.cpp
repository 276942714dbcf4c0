#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "cycavoid/enumerate.hpp"
#include "cycavoid/series.hpp"
#include "cycavoid/spectral.hpp"

namespace {

using namespace cycavoid;

WeightScheme avoiding(std::vector<std::string> words) { return WeightScheme::from_forbidden_words(words); }

void BM_BetaBruteforce(benchmark::State& state) {
  const auto s = avoiding({"213"});
  EnumerationOptions o;
  o.threads = 1;
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(beta_bruteforce(n, s, o).integer);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(factorial(n)));
}
BENCHMARK(BM_BetaBruteforce)->DenseRange(7, 10)->Unit(benchmark::kMillisecond);

void BM_WeightedCyclicSum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(weighted_cyclic_123_sum(n));
}
BENCHMARK(BM_WeightedCyclicSum)->Arg(10)->Arg(11)->Unit(benchmark::kMillisecond);

void BM_Assemble(benchmark::State& state) {
  const auto s = avoiding({"123"});
  GridOptions o;
  o.rule = state.range(1) ? TieRule::Refined : TieRule::Positional;
  for (auto _ : state) benchmark::DoNotOptimize(assemble_operator(s, static_cast<int>(state.range(0)), o).nonzeros());
}
BENCHMARK(BM_Assemble)->ArgsProduct({{16, 32, 64}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_TracePowers(benchmark::State& state) {
  const auto m = assemble_operator(avoiding({"213"}), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(trace_powers(m, 7, 1));
}
BENCHMARK(BM_TracePowers)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_TopEigenvalue(benchmark::State& state) {
  const auto m = assemble_operator(avoiding({"123"}), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(top_eigenvalue(m, 1e-12));
}
BENCHMARK(BM_TopEigenvalue)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
  const auto m = assemble_operator(avoiding({"123"}), static_cast<int>(state.range(0)));
  const auto method = state.range(1) ? EigenMethod::Subspace : EigenMethod::Dense;
  for (auto _ : state) benchmark::DoNotOptimize(full_spectrum(m, 4, method).eigenvalues.size());
}
BENCHMARK(BM_Spectrum)->Args({16, 0})->Args({16, 1})->Args({32, 0})->Args({32, 1})->Args({64, 1})
    ->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  const auto s = avoiding({"213"});
  for (auto _ : state) benchmark::DoNotOptimize(beta_montecarlo(8, s, state.range(0), 1, 1).mean);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_Series(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(series_beta_123(n, 1e-9).value);
}
BENCHMARK(BM_Series)->Arg(2)->Arg(3)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
