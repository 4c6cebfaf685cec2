// Microbenchmarks for the hot paths: scalar shrinkage, the SVD-dominated
// matrix prox, and whole solver iterations.

#include "fsvt/experiment.hpp"
#include "fsvt/operators.hpp"
#include "fsvt/solvers.hpp"
#include "fsvt/thresholding.hpp"

#include <benchmark/benchmark.h>

namespace {

void bm_scalar_prox_general(benchmark::State& state) {
  double gamma = 0.0;
  for (auto _ : state) {
    gamma += 1e-9; // vary the input so the call cannot be hoisted
    benchmark::DoNotOptimize(fsvt::scalar_prox_general(2.0, 1.0, 1.5 + gamma));
  }
}
BENCHMARK(bm_scalar_prox_general);

void bm_scalar_prox_convex(benchmark::State& state) {
  double gamma = 0.0;
  for (auto _ : state) {
    gamma += 1e-9;
    benchmark::DoNotOptimize(fsvt::scalar_prox_convex(0.5, 1.0, 1.5 + gamma));
  }
}
BENCHMARK(bm_scalar_prox_convex);

void bm_matrix_prox(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const fsvt::Matrix y = fsvt::gen_low_rank(n, n, n / 8, 1) +
                         0.01 * fsvt::gen_low_rank(n, n, n, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        fsvt::matrix_prox(y, 1.0, 0.1, fsvt::Regime::General));
}
BENCHMARK(bm_matrix_prox)->Arg(64)->Arg(128)->Arg(256);

void bm_aisvta_iteration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const fsvt::Matrix truth = fsvt::gen_low_rank(n, n, 5, 1);
  const fsvt::SamplingMask mask = fsvt::gen_mask(n, n, 0.5, 1);
  const fsvt::Vector b = fsvt::add_noise(truth, mask, 0.0, 1);
  const fsvt::CompletionMap map(mask);

  fsvt::SolverConfig cfg;
  cfg.mode = fsvt::LambdaMode::Adaptive;
  cfg.target_rank = 5;
  cfg.max_iter = 32;
  cfg.tol = 1e-300; // never trips: keep the work per run constant

  for (auto _ : state)
    benchmark::DoNotOptimize(fsvt::aisvta(map, b, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.max_iter);
}
BENCHMARK(bm_aisvta_iteration)->Arg(64)->Arg(128);

void bm_gradient_step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const fsvt::Matrix truth = fsvt::gen_low_rank(n, n, 30, 1);
  const fsvt::SamplingMask mask = fsvt::gen_mask(n, n, 0.5, 1);
  const fsvt::Vector b = fsvt::add_noise(truth, mask, 0.0, 1);
  const fsvt::CompletionMap map(mask);
  const fsvt::Matrix x = 0.5 * truth;
  for (auto _ : state)
    benchmark::DoNotOptimize(fsvt::gradient_step(x, map, b, 0.99));
}
BENCHMARK(bm_gradient_step)->Arg(256);

} // namespace

BENCHMARK_MAIN();
