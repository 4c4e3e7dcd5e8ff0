#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "sfq/sequence.hpp"

namespace sfq::ga {

using Rng = std::mt19937_64;

/// Maps a genome to a fitness to maximize. Must be pure: it may be called
/// concurrently from several threads.
using FitnessFn = std::function<double(std::span<const Bit>)>;

enum class Selection { roulette, tournament };
enum class Crossover { single_point, uniform };
enum class Termination { target_reached, max_iterations };

std::string_view to_string(Selection s);
std::string_view to_string(Crossover c);
std::string_view to_string(Termination t);

struct GAConfig {
  int population_size = 70;
  double mutation_prob = 0.001;
  double crossover_prob = 0.9;
  int mating_pool = 64;
  long max_iterations = 200000;
  double target_fitness = 0.9999;
  int elitism = 1;
  std::uint64_t seed = 1;
  Selection selection = Selection::roulette;
  Crossover crossover = Crossover::single_point;
  int tournament_size = 2;
  int threads = 0;  // fitness evaluation team size, 0 = OpenMP default

  /// Throws Error(InvalidConfig) naming the violated invariant.
  void validate() const;
};

struct GenerationStats {
  long generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  int evaluations = 0;  // fitness_fn calls spent on this generation
};

struct GARun {
  Genome best_genome;
  double best_fitness = 0.0;
  std::vector<GenerationStats> history;
  long generations_used = 0;
  Termination terminated_by = Termination::max_iterations;
};

/// Fitness-proportional draw of `pool_size` indices with replacement.
/// All-zero fitness falls back to uniform sampling.
std::vector<std::size_t> roulette_select(std::span<const double> fitnesses, std::size_t pool_size,
                                         Rng& rng);

/// Each draw is the fittest of `tournament_size` uniformly drawn indices.
std::vector<std::size_t> tournament_select(std::span<const double> fitnesses,
                                           std::size_t pool_size, int tournament_size, Rng& rng);

/// Children exchange tails at position `cut` (0 < cut < N).
std::pair<Genome, Genome> crossover_at(const Genome& a, const Genome& b, std::size_t cut);

/// With probability `prob` recombines the parents (single point: cut uniform
/// in [1, N-1]; uniform: each position swapped with probability 1/2),
/// otherwise returns them unchanged.
std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, Rng& rng, double prob,
                                    Crossover kind = Crossover::single_point);

/// Flips each bit independently with probability `per_bit_prob`.
void mutate(Genome& genome, Rng& rng, double per_bit_prob);

/// Called once per recorded generation; return false to stop early.
using ProgressFn = std::function<bool(const GenerationStats&)>;

/// Generational GA seeded from `initial`. Generation 0 is the initial
/// population (the seed plus mutated copies of it); each later generation is
/// the elite carried over unmutated, mutated offspring of the mating pool,
/// and the next-ranked members of the previous generation, mutated, to fill
/// the remaining slots. Stops at target_fitness or after max_iterations.
GARun optimize(const Genome& initial, const FitnessFn& fitness_fn, const GAConfig& config,
               const ProgressFn& progress = {});

}  // namespace sfq::ga
