#include <benchmark/benchmark.h>

#include "cmv/banded.hpp"
#include "cmv/caratheodory.hpp"
#include "cmv/coeffs.hpp"
#include "cmv/operator.hpp"
#include "cmv/tracemap.hpp"
#include "cmv/transfer.hpp"

namespace {

const cmv::VerblunskySequence& fibonacci() {
  static const auto seq =
      cmv::make_sturmian(0.5, -0.5, cmv::kGoldenFrequency, cmv::Support::two_sided);
  return seq;
}

void BM_BandApply(benchmark::State& state) {
  const long n = state.range(0);
  const auto window = cmv::build_extended_window(fibonacci(), -n / 2, n / 2);
  std::vector<cmv::cplx> x(static_cast<std::size_t>(window.band.size()), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(window.band.apply(x));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_BandApply)->Arg(1 << 10)->Arg(1 << 14);

void BM_BandedSolve(benchmark::State& state) {
  const long n = state.range(0);
  const auto window = cmv::build_extended_window(fibonacci(), -n / 2, n / 2);
  std::vector<cmv::cplx> rhs(static_cast<std::size_t>(window.band.size()));
  rhs[rhs.size() / 2] = 1.0;
  for (auto _ : state) {
    const cmv::BandedLU lu(window.band, cmv::cplx(0.5, 0.3), 0.0);
    benchmark::DoNotOptimize(lu.solve(rhs));
  }
}
BENCHMARK(BM_BandedSolve)->Arg(1 << 10)->Arg(1 << 14);

void BM_SchurAdaptive(benchmark::State& state) {
  const auto right = cmv::split_at_origin(fibonacci()).first;
  const double r = 1.0 - std::ldexp(1.0, -static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const cmv::SchurEvaluator ev(right);
    benchmark::DoNotOptimize(ev.evaluate_adaptive(std::polar(r, 1.0)));
  }
}
BENCHMARK(BM_SchurAdaptive)->Arg(4)->Arg(8)->Arg(12);

void BM_CocycleProduct(benchmark::State& state) {
  const auto right = cmv::split_at_origin(fibonacci()).first;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cmv::cocycle_product(right, std::polar(1.0, 1.0), state.range(0)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CocycleProduct)->Arg(1000)->Arg(100000);

void BM_TraceOrbit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto cf = cmv::golden_cf(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cmv::trace_orbit({0.5, -0.5}, cf, std::polar(1.0, 1.0), n));
  }
}
BENCHMARK(BM_TraceOrbit)->Arg(10)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
