// Serial reference vs OpenMP kernels on a Randers torus and an Asym1D interval.
#include "fg/calculus.hpp"
#include "fg/stencil.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

fg::WeightedSpace torus(int n) {
  fg::Mat A = fg::Mat::Identity(2, 2);
  fg::Vec b(2);
  b << 0.3, -0.2;
  return fg::build_space(fg::Domain::torus(1.0, 1.0, n, n), fg::MinkowskiNorm::randers(A, b),
                         "0.5*cos(2*pi*x)*sin(2*pi*y)");
}

fg::WeightedSpace interval(int n) {
  return fg::build_space(fg::Domain::interval(6.0, n), fg::MinkowskiNorm::asym1d(2.0, 1.0), "x^2/2");
}

fg::ScalarField field(const fg::WeightedSpace& s) { return s.sample("sin(2*pi*x)+0.3*cos(4*pi*y)+0.1*x"); }

template <fg::Exec E>
void BM_Laplacian(benchmark::State& state) {
  const fg::DiffOperators ops(torus(static_cast<int>(state.range(0))), 1e-10, E);
  const auto f = field(ops.space());
  for (auto _ : state) benchmark::DoNotOptimize(ops.laplacian(f));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.size()));
}

template <fg::Exec E>
void BM_LaplacianAsym(benchmark::State& state) {
  const fg::DiffOperators ops(interval(static_cast<int>(state.range(0))), 1e-10, E);
  const auto f = ops.space().sample("sin(x)+0.2*x^2");
  for (auto _ : state) benchmark::DoNotOptimize(ops.laplacian(f));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.size()));
}

template <fg::Exec E>
void BM_Gamma2Asym(benchmark::State& state) {
  const fg::DiffOperators ops(interval(static_cast<int>(state.range(0))), 1e-10, E);
  const auto f = ops.space().sample("sin(x)+0.2*x^2");
  for (auto _ : state) benchmark::DoNotOptimize(ops.gamma2(f));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.size()));
}

template <fg::Exec E>
void BM_Gamma2(benchmark::State& state) {
  const fg::DiffOperators ops(torus(static_cast<int>(state.range(0))), 1e-10, E);
  const auto f = field(ops.space());
  for (auto _ : state) benchmark::DoNotOptimize(ops.gamma2(f));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.size()));
}

void BM_ReferenceDivGrad(benchmark::State& state) {
  const auto s = torus(static_cast<int>(state.range(0)));
  const auto f = field(s);
  for (auto _ : state) benchmark::DoNotOptimize(fg::reference::divergence(s, fg::reference::differential(s, f)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.size()));
}

template <fg::Exec E>
void BM_StencilDivGrad(benchmark::State& state) {
  const fg::DiffOperators ops(torus(static_cast<int>(state.range(0))), 1e-10, E);
  const auto f = field(ops.space());
  for (auto _ : state) benchmark::DoNotOptimize(ops.divergence(ops.differential(f)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.size()));
}

}  // namespace

BENCHMARK(BM_Laplacian<fg::Exec::Serial>)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Laplacian<fg::Exec::Parallel>)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gamma2<fg::Exec::Serial>)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gamma2<fg::Exec::Parallel>)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LaplacianAsym<fg::Exec::Serial>)->Arg(4096)->Arg(65536)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LaplacianAsym<fg::Exec::Parallel>)->Arg(4096)->Arg(65536)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gamma2Asym<fg::Exec::Serial>)->Arg(4096)->Arg(65536)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gamma2Asym<fg::Exec::Parallel>)->Arg(4096)->Arg(65536)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReferenceDivGrad)->Arg(128);
BENCHMARK(BM_StencilDivGrad<fg::Exec::Serial>)->Arg(128);
BENCHMARK(BM_StencilDivGrad<fg::Exec::Parallel>)->Arg(128);

BENCHMARK_MAIN();
