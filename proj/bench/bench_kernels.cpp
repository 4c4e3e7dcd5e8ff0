// Serial reference paths against the fast and OpenMP-parallel kernels.

#include <benchmark/benchmark.h>

#include <random>

#include "sfq/experiments.hpp"
#include "sfq/kernels.hpp"

namespace {

using namespace sfq;

const UnitaryDatabase& db() {
  static const UnitaryDatabase d = build_database(ModelParams{});
  return d;
}

std::vector<Genome> population(std::size_t count) {
  std::mt19937_64 rng(1);
  std::bernoulli_distribution bit(0.12);
  std::vector<Genome> pop(count, Genome(2000));
  for (auto& g : pop) {
    for (auto& b : g) b = bit(rng) ? 1 : 0;
  }
  return pop;
}

void BM_EvolveFullMatrix(benchmark::State& state) {
  const PulseSequence seq(population(1).front(), db().params.pixel());
  const TargetGate target = TargetGate::pauli_y(3);
  for (auto _ : state) benchmark::DoNotOptimize(fidelity(evolve(seq, db()), target));
}
BENCHMARK(BM_EvolveFullMatrix);

void BM_KernelFidelity(benchmark::State& state) {
  const Genome g = population(1).front();
  const FidelityKernel kernel(db(), TargetGate::pauli_y(3), g.size());
  for (auto _ : state) benchmark::DoNotOptimize(kernel.fidelity(g));
}
BENCHMARK(BM_KernelFidelity);

void BM_PopulationSerial(benchmark::State& state) {
  const auto pop = population(70);
  const FidelityKernel kernel(db(), TargetGate::pauli_y(3), 2000);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_population_serial(kernel, pop));
}
BENCHMARK(BM_PopulationSerial);

void BM_PopulationParallel(benchmark::State& state) {
  const auto pop = population(70);
  const FidelityKernel kernel(db(), TargetGate::pauli_y(3), 2000);
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_population(kernel, pop, threads));
}
BENCHMARK(BM_PopulationParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

void BM_JitterSerial(benchmark::State& state) {
  const PulseSequence seq = initial_sequence(db().params, 100);
  const FidelityKernel kernel(db(), TargetGate::pauli_y(3), seq.size());
  JitterSpec spec;
  spec.sigma = 1e-12;
  spec.runs = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(jitter_eval_serial(seq, kernel, spec));
}
BENCHMARK(BM_JitterSerial)->Unit(benchmark::kMillisecond);

void BM_JitterParallel(benchmark::State& state) {
  const PulseSequence seq = initial_sequence(db().params, 100);
  const FidelityKernel kernel(db(), TargetGate::pauli_y(3), seq.size());
  JitterSpec spec;
  spec.sigma = 1e-12;
  spec.runs = 1000;
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(jitter_eval(seq, kernel, spec, threads));
}
BENCHMARK(BM_JitterParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_BuildDatabase(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_database(ModelParams{}));
}
BENCHMARK(BM_BuildDatabase)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
