// Serial reference kernels against their OpenMP counterparts on a
// feature matrix shaped like the full layout (324 columns).
//
//   kernel_bench --benchmark_filter=Objective
//   OMP_NUM_THREADS=4 kernel_bench

#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "checkworthy/kernels.hpp"

using namespace checkworthy;

namespace {

constexpr std::size_t kCols = 324;

struct Data {
  DenseMatrix x;
  std::vector<double> y, w;
};

const Data& data(std::size_t rows) {
  static std::map<std::size_t, Data> cache;
  auto it = cache.find(rows);
  if (it != cache.end()) return it->second;
  std::mt19937_64 rng(rows);
  std::normal_distribution<double> n;
  Data d{DenseMatrix(rows, kCols), std::vector<double>(rows), std::vector<double>(kCols)};
  for (auto& v : d.x.values) v = n(rng);
  for (auto& v : d.y) v = rng() % 40 == 0;
  for (auto& v : d.w) v = 0.05 * n(rng);
  return cache.emplace(rows, std::move(d)).first->second;
}

template <auto Fn>
void Objective(benchmark::State& state) {
  const auto& d = data(static_cast<std::size_t>(state.range(0)));
  std::vector<double> grad(kCols + 1);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(d.x, d.y, d.w, 0.1, 1.0, grad));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void Scores(benchmark::State& state) {
  const auto& d = data(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(d.x.rows);
  for (auto _ : state) {
    Fn(d.x, d.w, 0.1, out);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void Stats(benchmark::State& state) {
  const auto& d = data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(d.x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void Standardize(benchmark::State& state) {
  const auto& d = data(static_cast<std::size_t>(state.range(0)));
  const auto stats = kernels::reference::column_stats(d.x);
  for (auto _ : state) {
    state.PauseTiming();
    auto x = d.x;
    state.ResumeTiming();
    Fn(x, stats);
    benchmark::DoNotOptimize(x.values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void sizes(benchmark::internal::Benchmark* b) {
  // CTL'18 train, CTL'19 train, and a larger synthetic size
  for (int rows : {4064, 16421, 65536}) b->Arg(rows);
  b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(Objective<kernels::reference::logistic_objective>)->Name("Objective/serial")->Apply(sizes);
BENCHMARK(Objective<kernels::logistic_objective>)->Name("Objective/openmp")->Apply(sizes);
BENCHMARK(Scores<kernels::reference::linear_scores>)->Name("Scores/serial")->Apply(sizes);
BENCHMARK(Scores<kernels::linear_scores>)->Name("Scores/openmp")->Apply(sizes);
BENCHMARK(Stats<kernels::reference::column_stats>)->Name("ColumnStats/serial")->Apply(sizes);
BENCHMARK(Stats<kernels::column_stats>)->Name("ColumnStats/openmp")->Apply(sizes);
BENCHMARK(Standardize<kernels::reference::standardize_in_place>)->Name("Standardize/serial")->Apply(sizes);
BENCHMARK(Standardize<kernels::standardize_in_place>)->Name("Standardize/openmp")->Apply(sizes);

BENCHMARK_MAIN();
