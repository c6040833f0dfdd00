#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "nlqw/observables.hpp"
#include "nlqw/sweep.hpp"
#include "nlqw/walk.hpp"

using namespace nlqw;

namespace {

// Normalized field spread evenly over every site but the two edge sites.
SpinorField filled(std::int64_t sites) {
  const auto n = static_cast<std::size_t>(sites);
  const complex z{1.0 / std::sqrt(2.0 * static_cast<double>(n - 2)), 0.0};
  std::vector<complex> a(n, z), b(n, z * complex{0.0, 1.0});
  a.front() = a.back() = b.front() = b.back() = complex{};
  return SpinorField(std::move(a), std::move(b), n / 2);
}

void BM_Step(benchmark::State& state) {
  const auto sites = state.range(0);
  const double chi = static_cast<double>(state.range(1)) / 10.0;
  const SpinorField field = filled(sites);
  SpinorField out(field.size(), field.origin());
  const Coin coin = Coin::from_angle(std::numbers::pi / 4);
  for (auto _ : state) {
    step_into(field, coin, chi, out);
    benchmark::DoNotOptimize(out.a().data());
  }
  state.SetItemsProcessed(state.iterations() * sites);
}
BENCHMARK(BM_Step)->ArgsProduct({{1 << 10, 1 << 14, 1 << 17}, {0, 6}});

void BM_Observables(benchmark::State& state) {
  const SpinorField field = filled(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(observe(1, field));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Observables)->Arg(1 << 10)->Arg(1 << 15);

void BM_Walk(benchmark::State& state) {
  const double chi = static_cast<double>(state.range(1)) / 10.0;
  const WalkParams p{std::numbers::pi / 3, chi, state.range(0), InitialState::symmetric_circular, 2};
  for (auto _ : state) benchmark::DoNotOptimize(evolve(p));
}
BENCHMARK(BM_Walk)->ArgsProduct({{2000, 10000}, {0, 6}})->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  SweepSpec s;
  s.theta = {0.0, std::numbers::pi, 5};
  s.chi = {0.0, 2.0, 5};
  s.steps = 500;
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(s, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
BENCHMARK_MAIN();
