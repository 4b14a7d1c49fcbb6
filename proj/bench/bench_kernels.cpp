// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include "bornless/events.hpp"
#include "bornless/freqtest.hpp"
#include "bornless/gamble.hpp"
#include "bornless/stories.hpp"

namespace {

using namespace bornless;

GameConfig game() {
  return GameConfig::from_probability(Rational(1, 2), Rational(3, 2), BonusSpec::geometric(Rational(1, 2)), 10000, 7);
}

void BM_HaltingParallel(benchmark::State& state) {
  const auto cfg = game();
  for (auto _ : state) benchmark::DoNotOptimize(halting_fraction(cfg, static_cast<std::size_t>(state.range(0))));
}
void BM_HaltingSerial(benchmark::State& state) {
  const auto cfg = game();
  for (auto _ : state) benchmark::DoNotOptimize(halting_fraction_serial(cfg, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_HaltingParallel)->Arg(10000);
BENCHMARK(BM_HaltingSerial)->Arg(10000);

FreqTestSpec spec() { return FreqTestSpec::from_probability(0.5, Rational(3, 5)); }

void BM_DensePiNParallel(benchmark::State& state) {
  const auto s = spec();
  for (auto _ : state) benchmark::DoNotOptimize(dense_pi_n(s, static_cast<unsigned>(state.range(0))));
}
void BM_DensePiNSerial(benchmark::State& state) {
  const auto s = spec();
  for (auto _ : state) benchmark::DoNotOptimize(dense_pi_n_serial(s, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_DensePiNParallel)->Arg(6)->Arg(8);
BENCHMARK(BM_DensePiNSerial)->Arg(6)->Arg(8);

void BM_TailProfileParallel(benchmark::State& state) {
  const auto s = spec();
  for (auto _ : state) benchmark::DoNotOptimize(tail_profile(s, 1, static_cast<unsigned>(state.range(0))));
}
void BM_TailProfileSerial(benchmark::State& state) {
  const auto s = spec();
  for (auto _ : state) benchmark::DoNotOptimize(tail_profile_serial(s, 1, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_TailProfileParallel)->Arg(2000);
BENCHMARK(BM_TailProfileSerial)->Arg(2000);

Plot plots(unsigned horizon, unsigned m, Plot* original) {
  // s5 carries an all-"ok" plot, so every pair of events is compared.
  const auto corpus = table1_corpus();
  FreqTestSpec d(corpus[4].psi, corpus[4].family, "h", Rational(3, 5));
  *original = expand_plot(corpus[4], ExperimentKind::PMStar, horizon, d);
  return perturb_plot(*original, d, m).plot;
}

void BM_HausdorffParallel(benchmark::State& state) {
  Plot original(ExperimentKind::PMStar, 1, {});
  Plot perturbed = plots(static_cast<unsigned>(state.range(0)), 1, &original);
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff(perturbed, original));
}
void BM_HausdorffSerial(benchmark::State& state) {
  Plot original(ExperimentKind::PMStar, 1, {});
  Plot perturbed = plots(static_cast<unsigned>(state.range(0)), 1, &original);
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff_serial(perturbed, original));
}
BENCHMARK(BM_HausdorffParallel)->Arg(200);
BENCHMARK(BM_HausdorffSerial)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
