#include <benchmark/benchmark.h>

#include "abloop/curve.hpp"
#include "abloop/kernels.hpp"
#include "abloop/strip2d.hpp"

namespace {

const abloop::FrameField& frame() {
  static const abloop::FrameField f = abloop::FrameField::build(abloop::CurveSpec::perturbed_circle(0.3), 2048);
  return f;
}

abloop::StripFieldRequest request(int n_s, abloop::StripForm form) {
  abloop::StripFieldRequest rq;
  rq.frame = &frame();
  rq.c0 = 0.25;
  rq.a = 0.3;
  rq.n_s = n_s;
  rq.n_u = 129;
  rq.form = form;
  return rq;
}

void BM_fields_serial(benchmark::State& state) {
  const auto rq = request(static_cast<int>(state.range(0)), static_cast<abloop::StripForm>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(abloop::serial::evaluate_strip_fields(rq));
}

void BM_fields_parallel(benchmark::State& state) {
  const auto rq = request(static_cast<int>(state.range(0)), static_cast<abloop::StripForm>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(abloop::parallel::evaluate_strip_fields(rq));
}

void BM_assemble_and_solve(benchmark::State& state) {
  abloop::StripSetup setup;
  setup.parallel = state.range(0) != 0;
  for (auto _ : state) {
    const auto op = abloop::assemble(frame(), abloop::Flux{0.25}, 0.3, 20.0, {128, 129}, setup);
    benchmark::DoNotOptimize(abloop::lowest_eigs(op, 2));
  }
}

}  // namespace

BENCHMARK(BM_fields_serial)->Args({128, 0})->Args({256, 0})->Args({128, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fields_parallel)->Args({128, 0})->Args({256, 0})->Args({128, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_assemble_and_solve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
