#include <gtest/gtest.h>

#include <random>

#include "sfq/error.hpp"
#include "sfq/experiments.hpp"
#include "sfq/kernels.hpp"

namespace sfq {
namespace {

const UnitaryDatabase& default_db() {
  static const UnitaryDatabase db = build_database(ModelParams{});
  return db;
}

std::vector<Genome> random_population(std::size_t count, std::size_t length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution bit(0.1);
  std::vector<Genome> pop(count, Genome(length));
  for (auto& g : pop) {
    for (auto& b : g) b = bit(rng) ? 1 : 0;
  }
  return pop;
}

TEST(FidelityKernel, AgreesWithFullMatrixEvolution) {
  const auto& db = default_db();
  const TargetGate target = TargetGate::pauli_y(3);
  const FidelityKernel kernel(db, target, 2000);
  const auto pop = random_population(40, 2000, 1);
  for (const auto& g : pop) {
    const double reference = fidelity(evolve(PulseSequence(g, db.params.pixel()), db), target);
    EXPECT_NEAR(kernel.fidelity(g), reference, 1e-10);
  }
  const PulseSequence seed = initial_sequence(db.params, 100);
  EXPECT_NEAR(kernel.fidelity(seed.bits()), fidelity(evolve(seed, db), target), 1e-12);
}

TEST(FidelityKernel, WorksForOtherLevelCounts) {
  for (int levels : {2, 4, 5}) {
    ModelParams p;
    p.levels = levels;
    const UnitaryDatabase db = build_database(p, 100);
    const TargetGate target = TargetGate::pauli_y(levels);
    const FidelityKernel kernel(db, target, 300);
    for (const auto& g : random_population(5, 300, 3)) {
      EXPECT_NEAR(kernel.fidelity(g), fidelity(evolve(PulseSequence(g, p.pixel()), db), target),
                  1e-11);
    }
  }
}

TEST(FidelityKernel, RejectsEmptyAndOverlongGenomes) {
  const FidelityKernel kernel(default_db(), TargetGate::pauli_y(3), 10);
  EXPECT_THROW(kernel.fidelity(Genome{}), Error);
  EXPECT_THROW(kernel.fidelity(Genome(11, 0)), Error);
  EXPECT_NO_THROW(kernel.fidelity(Genome(10, 0)));
  EXPECT_THROW(FidelityKernel(default_db(), TargetGate::pauli_y(4), 10), Error);
}

TEST(FidelityKernel, DelayedPulsesMatchConjugatedReference) {
  const auto& db = default_db();
  const TargetGate target = TargetGate::pauli_y(3);
  const FidelityKernel kernel(db, target, 400);
  std::mt19937_64 rng(12);
  std::normal_distribution<double> delay(0.0, 3e-12);
  for (const auto& g : random_population(10, 400, 5)) {
    const PulseSequence seq(g, db.params.pixel());
    std::vector<double> delays(seq.pulse_count());
    for (auto& d : delays) d = delay(rng);
    const double reference = fidelity(evolve_jittered(seq, db, delays), target);
    EXPECT_NEAR(kernel.fidelity_with_delays(g, delays), reference, 1e-11);
  }
}

TEST(FidelityKernel, ZeroDelaysAreBitwiseNoiseless) {
  const auto& db = default_db();
  const FidelityKernel kernel(db, TargetGate::pauli_y(3), 2000);
  const PulseSequence seed = initial_sequence(db.params, 100);
  const std::vector<double> zeros(seed.pulse_count(), 0.0);
  EXPECT_EQ(kernel.fidelity_with_delays(seed.bits(), zeros), kernel.fidelity(seed.bits()));
}

TEST(EvaluatePopulation, ParallelMatchesSerialReference) {
  const FidelityKernel kernel(default_db(), TargetGate::pauli_y(3), 1000);
  const auto pop = random_population(97, 1000, 21);
  const auto serial = evaluate_population_serial(kernel, pop);
  for (int threads : {0, 1, 2, 4}) {
    EXPECT_EQ(evaluate_population(kernel, pop, threads), serial) << threads;
  }
}

}  // namespace
}  // namespace sfq
