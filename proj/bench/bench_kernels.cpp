#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ariadapt/harness.hpp"
#include "ariadapt/kernels.hpp"
#include "ariadapt/learn.hpp"
#include "ariadapt/synth.hpp"

using namespace ariadapt;

namespace {

struct Problem {
  std::vector<double> x, wp, wn, params;
  std::size_t cols = 0;
  kernels::GroupedDesign view() const { return {x, cols, wp, wn}; }
};

Problem makeProblem(std::size_t rows, std::size_t cols) {
  std::mt19937_64 gen(rows * 131 + cols);
  std::bernoulli_distribution bit(0.3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Problem p;
  p.cols = cols;
  p.x.resize(rows * cols);
  for (auto& v : p.x) v = bit(gen);
  p.wp.resize(rows);
  p.wn.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    p.wp[i] = 1.0 + (gen() % 3);
    p.wn[i] = 1.0 + (gen() % 5);
  }
  p.params.resize(cols + 1);
  for (auto& v : p.params) v = 0.3 * u(gen);
  return p;
}

template <bool Parallel>
void BM_NewtonSystem(benchmark::State& state) {
  const auto p = makeProblem(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    auto sys = Parallel ? kernels::newtonSystem(p.view(), p.params) : kernels::serial::newtonSystem(p.view(), p.params);
    benchmark::DoNotOptimize(sys.information.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_LinearScores(benchmark::State& state) {
  const auto p = makeProblem(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  std::vector<double> out(p.wp.size());
  for (auto _ : state) {
    if (Parallel) kernels::linearScores(p.x, p.cols, p.params, out);
    else kernels::serial::linearScores(p.x, p.cols, p.params, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FitPreset(benchmark::State& state) {
  Rng rng(1);
  const auto data = prepareDataset(generate(*findPreset("NYUMC"), rng));
  for (auto _ : state) benchmark::DoNotOptimize(fitLogistic(data).intercept);
}

}  // namespace

BENCHMARK(BM_NewtonSystem<false>)->Args({2000, 20})->Args({20000, 60});
BENCHMARK(BM_NewtonSystem<true>)->Args({2000, 20})->Args({20000, 60});
BENCHMARK(BM_LinearScores<false>)->Args({2000, 20})->Args({200000, 60});
BENCHMARK(BM_LinearScores<true>)->Args({2000, 20})->Args({200000, 60});
BENCHMARK(BM_FitPreset)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
