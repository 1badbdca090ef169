#include <benchmark/benchmark.h>

#include "carleson/functionals.hpp"
#include "carleson/halfplane.hpp"
#include "carleson/trig_polynomial.hpp"

using namespace carleson;

namespace {

void BM_KernelEval(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k_kernel(0.5, 1.5, x));
    x += 1e-6;
  }
}
BENCHMARK(BM_KernelEval);

void BM_PoissonExtension(benchmark::State& state) {
  const NormedSpace space(2.0, 2);
  const TrigPolynomial f =
      random_polynomial(static_cast<int>(state.range(0)), 0.5, space, 7);
  const Complex z(0.3, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(f.eval(z));
}
BENCHMARK(BM_PoissonExtension)->Arg(16)->Arg(64)->Arg(256);

void BM_CarlesonPoisson(benchmark::State& state) {
  const NormedSpace space(2.0, 2);
  const TrigPolynomial f =
      random_polynomial(static_cast<int>(state.range(0)), 0.5, space, 7);
  PoissonCarlesonOptions opts;
  opts.disc = DiscGridSpec{0, 8, 6};
  opts.z0_levels = 2;
  opts.with_error_estimate = false;
  for (auto _ : state)
    benchmark::DoNotOptimize(carleson_poisson(space, f, 2.0, opts).value);
}
BENCHMARK(BM_CarlesonPoisson)->Arg(8)->Arg(32);

void BM_ApplyPhi(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  const ConeGrid cone = ConeGrid::make(1.0 / 64.0, 8.0, 2 * res);
  const LineGrid line = LineGrid::make(32.0, 8 * res + 1);
  ConeFunction h = ConeFunction::zeros(cone, line, NormedSpace(2.0, 1));
  for (auto& per_x : h.values)
    for (auto& cell : per_x) cell[0] = Complex(1.0, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(apply_Phi(h));
}
BENCHMARK(BM_ApplyPhi)->Arg(1)->Arg(2);

}  // namespace

BENCHMARK_MAIN();
