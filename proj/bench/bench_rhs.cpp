// Compares the right-hand-side kernels: the independent reference
// evaluation, the fused serial path, and the same fused path across OpenMP
// threads.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cliffsolve/models.hpp"

using namespace cliffsolve;

namespace {

FirstOrderSystem benched_system() {
  const Signature sig = make_signature(1, 3);
  DiracModelSpec spec{Tetrad::identity(sig), canonical_idempotent(2)};
  const Multivector l = Complex(0.0, 0.4) * (Multivector::identity(sig) +
                                             Multivector::generator(sig, 1));
  spec.A.push_back(GaugeComponent{1, l});
  spec.A.push_back(GaugeComponent{2, l, ScalarProfile::fourier_mode(1, 1.0)});
  return assemble_model_dirac(spec);
}

Grid grid_for(int points) {
  Grid g;
  g.axes = {AxisSpec{2, 1.0, points}};
  return g;
}

std::vector<Complex> random_state(std::size_t size) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Complex> u(size);
  for (Complex& c : u) c = Complex{unit(rng), unit(rng)};
  return u;
}

void bm_rhs(benchmark::State& state, ExecPolicy policy) {
  const int points = static_cast<int>(state.range(0));
  const FirstOrderSystem sys = benched_system();
  const CompiledSystem compiled(sys, grid_for(points));
  const std::vector<Complex> u = random_state(compiled.points() * compiled.D());
  std::vector<Complex> du(u.size());
  for (auto _ : state) {
    compiled.eval_rhs(u, du, policy);
    benchmark::DoNotOptimize(du.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(points));
}

}  // namespace

BENCHMARK_CAPTURE(bm_rhs, reference, ExecPolicy::Reference)
    ->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK_CAPTURE(bm_rhs, serial, ExecPolicy::Serial)
    ->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK_CAPTURE(bm_rhs, openmp, ExecPolicy::OpenMP)
    ->Arg(256)->Arg(1024)->Arg(4096);

BENCHMARK_MAIN();
