// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "lms/bpb.hpp"
#include "lms/random.hpp"
#include "lms/search.hpp"

namespace {

lms::Dataset instance(std::size_t n, std::size_t p) {
  lms::Rng rng(n * 31 + p);
  return lms::random_dataset(n, p, rng);
}

void BM_CandidatesSerial(benchmark::State& state) {
  const auto data = instance(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(lms::build_candidates_serial(data, lms::kDefaultTolerance));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(lms::binomial(data.n(), 4)));
}

void BM_CandidatesParallel(benchmark::State& state) {
  const auto data = instance(static_cast<std::size_t>(state.range(0)), 3);
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lms::build_candidates(data, lms::kDefaultTolerance, threads));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(lms::binomial(data.n(), 4)));
}

void BM_Bpb(benchmark::State& state) {
  const auto data = instance(40, 3);
  lms::BpbConfig config;
  config.iterations = 2000;
  lms::SolveOptions options;
  options.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lms::bpb_solve(data, config, options));
}

void BM_Exhaustive(benchmark::State& state) {
  const auto data = instance(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(lms::exhaustive_solve(data));
}

}  // namespace

BENCHMARK(BM_CandidatesSerial)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CandidatesParallel)
    ->ArgsProduct({{16, 24}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(BM_Bpb)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Exhaustive)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
