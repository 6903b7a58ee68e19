#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "plab/ensemble.hpp"
#include "plab/kernels.hpp"
#include "plab/samples.hpp"

using namespace plab;

namespace {

ModelParams model(int n) {
  ModelParams m = ModelParams::make(1.0, 2.5, 0.5, n);
  for (int i = -n; i <= n; ++i) m.g[i] = std::exp(-0.01 * i * i);
  return m;
}

LatticeVector state(int n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d;
  LatticeVector v(n);
  for (double& x : v.values()) x = d(rng);
  return v;
}

void BM_RhsReference(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const ModelParams m = model(n);
  const LatticeVector v = state(n);
  for (auto _ : st) benchmark::DoNotOptimize(rhs_reference(m, 0.3, v));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(v.size()));
}

template <void (*Kernel)(const ModelParams&, double, std::span<const double>, std::span<double>, std::span<double>)>
void BM_Rhs(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const ModelParams m = model(n);
  const LatticeVector v = state(n);
  std::vector<double> out(v.size()), scratch(v.size());
  for (auto _ : st) {
    Kernel(m, 0.3, v.values(), out, scratch);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(v.size()));
}

template <double (*Distance)(std::span<const LatticeVector>, std::span<const LatticeVector>)>
void BM_Semidistance(benchmark::State& st) {
  BallSampleSpec spec;
  spec.random_directions = static_cast<int>(st.range(0));
  const auto xs = ball_samples(64, 1.0, spec);
  spec.seed = 2;
  const auto ys = ball_samples(64, 2.0, spec);
  for (auto _ : st) benchmark::DoNotOptimize(Distance(xs, ys));
}

double square_root_work(std::size_t i) {
  double s = 0.0;
  for (int k = 0; k < 20000; ++k) s += std::sqrt(static_cast<double>(i + k));
  return s;
}

void BM_EnsembleSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(serial_map(static_cast<std::size_t>(st.range(0)), square_root_work));
}

void BM_EnsembleParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(parallel_map(static_cast<std::size_t>(st.range(0)), square_root_work));
}

}  // namespace

BENCHMARK(BM_RhsReference)->RangeMultiplier(8)->Range(64, 1 << 18);
BENCHMARK(BM_Rhs<rhs_serial>)->Name("BM_RhsSerial")->RangeMultiplier(8)->Range(64, 1 << 18);
BENCHMARK(BM_Rhs<rhs_parallel>)->Name("BM_RhsParallel")->RangeMultiplier(8)->Range(64, 1 << 18)->UseRealTime();
BENCHMARK(BM_Semidistance<semidistance_serial>)->Name("BM_SemidistanceSerial")->Arg(64)->Arg(512);
BENCHMARK(BM_Semidistance<semidistance_parallel>)->Name("BM_SemidistanceParallel")->Arg(64)->Arg(512)->UseRealTime();
BENCHMARK(BM_EnsembleSerial)->Arg(256);
BENCHMARK(BM_EnsembleParallel)->Arg(256)->UseRealTime();

BENCHMARK_MAIN();
