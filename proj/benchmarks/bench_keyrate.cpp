#include <benchmark/benchmark.h>

#include "tsqkd/keyrate.hpp"
#include "tsqkd/objective.hpp"

namespace {

using namespace tsqkd;

// Trusted source and detector at 80 km, the heaviest detector model.
channel::LinkModel link() {
  channel::LinkModel l;
  l.constellation = protocol::build_constellation(0.65);
  l.source = {0.001};
  l.channel = {80.0, 0.2, 0.02};
  l.detector = {0.45, 0.297};
  return l;
}

keyrate::KeyRateOptions options(int cutoff, bool symmetric) {
  keyrate::KeyRateOptions o;
  o.cutoff = cutoff;
  o.use_symmetry = symmetric;
  return o;
}

void BM_RegionOperators(benchmark::State& state) {
  const auto l = link();
  for (auto _ : state) {
    benchmark::DoNotOptimize(detector::region_operators(l.regions, l.detector, fock::Cutoff(state.range(0))));
  }
}
BENCHMARK(BM_RegionOperators)->DenseRange(6, 12, 2)->Unit(benchmark::kMillisecond);

void BM_ObjectiveAndGradient(benchmark::State& state) {
  const auto problem = keyrate::build_keyrate_problem(link(), options(state.range(0), true));
  const CMatrix rho = problem.basis.expand(keyrate::initial_point(problem, {}));
  for (auto _ : state) {
    benchmark::DoNotOptimize(keyrate::objective_and_gradient(rho, problem.maps, problem.epsilon));
  }
}
BENCHMARK(BM_ObjectiveAndGradient)->DenseRange(6, 12, 2)->Unit(benchmark::kMillisecond);

// One Frank-Wolfe subproblem: the linearization SDP at the start point.
void BM_LinearizationSdp(benchmark::State& state) {
  const bool symmetric = state.range(1) != 0;
  const auto problem = keyrate::build_keyrate_problem(link(), options(state.range(0), symmetric));
  const CMatrix rho = problem.basis.expand(keyrate::initial_point(problem, {}));
  const auto value = keyrate::objective_and_gradient(rho, problem.maps, problem.epsilon);
  const auto sdp_problem =
      keyrate::build_problem(problem.constraints, problem.basis, problem.basis.reduce(value.gradient));
  for (auto _ : state) benchmark::DoNotOptimize(sdp::solve(sdp_problem));
}
BENCHMARK(BM_LinearizationSdp)
    ->Args({6, 1})
    ->Args({8, 1})
    ->Args({10, 1})
    ->Args({6, 0})
    ->Args({8, 0})
    ->Unit(benchmark::kMillisecond);

void BM_KeyRate(benchmark::State& state) {
  const auto l = link();
  const auto o = options(state.range(0), true);
  for (auto _ : state) benchmark::DoNotOptimize(keyrate::key_rate(l, o));
}
BENCHMARK(BM_KeyRate)->Arg(8)->Arg(10)->Unit(benchmark::kSecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
