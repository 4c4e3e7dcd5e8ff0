#include "sfq/ga.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sfq/error.hpp"

namespace sfq::ga {

std::string_view to_string(Selection s) {
  return s == Selection::roulette ? "roulette" : "tournament";
}

std::string_view to_string(Crossover c) {
  return c == Crossover::single_point ? "single_point" : "uniform";
}

std::string_view to_string(Termination t) {
  return t == Termination::target_reached ? "target_reached" : "max_iterations";
}

void GAConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (population_size < 1) fail("population_size >= 1 violated");
  if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) fail("0 <= mutation_prob <= 1 violated");
  if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) fail("0 <= crossover_prob <= 1 violated");
  if (elitism < 0 || elitism >= population_size) fail("0 <= elitism < population_size violated");
  if (mating_pool < 0 || mating_pool > population_size) {
    fail("0 <= mating_pool <= population_size violated");
  }
  if (max_iterations < 0) fail("max_iterations >= 0 violated");
  if (tournament_size < 1) fail("tournament_size >= 1 violated");
}

std::vector<std::size_t> roulette_select(std::span<const double> fitnesses, std::size_t pool_size,
                                         Rng& rng) {
  if (fitnesses.empty()) throw Error(ErrorCode::InvalidConfig, "selection from empty population");
  std::vector<double> cumulative(fitnesses.size());
  double total = 0.0;
  for (std::size_t i = 0; i < fitnesses.size(); ++i) {
    if (!(fitnesses[i] >= 0.0)) {
      throw Error(ErrorCode::InvalidConfig, "roulette selection needs nonnegative fitness");
    }
    total += fitnesses[i];
    cumulative[i] = total;
  }
  std::vector<std::size_t> picks;
  picks.reserve(pool_size);
  if (total <= 0.0) {
    std::uniform_int_distribution<std::size_t> any(0, fitnesses.size() - 1);
    for (std::size_t k = 0; k < pool_size; ++k) picks.push_back(any(rng));
    return picks;
  }
  std::uniform_real_distribution<double> spin(0.0, total);
  for (std::size_t k = 0; k < pool_size; ++k) {
    const double r = spin(rng);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    // r can equal total through rounding; clamp to the last positive slot.
    if (it == cumulative.end()) --it;
    auto idx = static_cast<std::size_t>(it - cumulative.begin());
    while (fitnesses[idx] <= 0.0 && idx > 0) --idx;
    picks.push_back(idx);
  }
  return picks;
}

std::vector<std::size_t> tournament_select(std::span<const double> fitnesses,
                                           std::size_t pool_size, int tournament_size, Rng& rng) {
  if (fitnesses.empty()) throw Error(ErrorCode::InvalidConfig, "selection from empty population");
  std::uniform_int_distribution<std::size_t> any(0, fitnesses.size() - 1);
  std::vector<std::size_t> picks;
  picks.reserve(pool_size);
  for (std::size_t k = 0; k < pool_size; ++k) {
    std::size_t best = any(rng);
    for (int t = 1; t < tournament_size; ++t) {
      const std::size_t c = any(rng);
      if (fitnesses[c] > fitnesses[best]) best = c;
    }
    picks.push_back(best);
  }
  return picks;
}

std::pair<Genome, Genome> crossover_at(const Genome& a, const Genome& b, std::size_t cut) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "crossover parents differ");
  if (cut == 0 || cut >= a.size()) {
    throw Error(ErrorCode::InvalidConfig, "crossover cut must lie in [1, N-1]");
  }
  Genome c1 = a;
  Genome c2 = b;
  std::copy(b.begin() + static_cast<std::ptrdiff_t>(cut), b.end(),
            c1.begin() + static_cast<std::ptrdiff_t>(cut));
  std::copy(a.begin() + static_cast<std::ptrdiff_t>(cut), a.end(),
            c2.begin() + static_cast<std::ptrdiff_t>(cut));
  return {std::move(c1), std::move(c2)};
}

std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, Rng& rng, double prob,
                                    Crossover kind) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "crossover parents differ");
  std::bernoulli_distribution happens(prob);
  if (!happens(rng) || a.size() < 2) return {a, b};
  if (kind == Crossover::single_point) {
    std::uniform_int_distribution<std::size_t> cut(1, a.size() - 1);
    return crossover_at(a, b, cut(rng));
  }
  Genome c1 = a;
  Genome c2 = b;
  std::bernoulli_distribution swap(0.5);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (swap(rng)) std::swap(c1[i], c2[i]);
  }
  return {std::move(c1), std::move(c2)};
}

void mutate(Genome& genome, Rng& rng, double per_bit_prob) {
  if (per_bit_prob <= 0.0 || genome.empty()) return;
  if (per_bit_prob >= 1.0) {
    for (auto& b : genome) b ^= 1;
    return;
  }
  // Gaps between flipped positions of independent Bernoulli(p) trials are
  // geometric, so only the flipped positions are drawn.
  std::geometric_distribution<std::size_t> gap(per_bit_prob);
  for (std::size_t i = gap(rng); i < genome.size(); i += gap(rng) + 1) genome[i] ^= 1;
}

namespace {

struct Member {
  Genome genome;
  double fitness = 0.0;
  bool evaluated = false;
};

// Evaluates every member lacking a fitness; returns the number of calls.
int evaluate(std::vector<Member>& population, const FitnessFn& fitness_fn, int threads) {
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (!population[i].evaluated) todo.push_back(i);
  }
  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(todo.size());
#ifdef _OPENMP
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(team)
#endif
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    Member& m = population[todo[static_cast<std::size_t>(k)]];
    try {
      m.fitness = fitness_fn(m.genome);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(sfq_ga_failure)
#endif
      if (!failure) failure = std::current_exception();
    }
    m.evaluated = true;
  }
  (void)threads;
  if (failure) std::rethrow_exception(failure);
  return static_cast<int>(todo.size());
}

// Indices sorted by descending fitness, ties by index.
std::vector<std::size_t> ranking(const std::vector<Member>& population) {
  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return population[a].fitness > population[b].fitness;
  });
  return order;
}

}  // namespace

GARun optimize(const Genome& initial, const FitnessFn& fitness_fn, const GAConfig& config,
               const ProgressFn& progress) {
  config.validate();
  if (initial.empty()) throw Error(ErrorCode::InvalidConfig, "initial genome is empty");
  if (!fitness_fn) throw Error(ErrorCode::InvalidConfig, "no fitness function");

  Rng rng(config.seed);
  const auto pop_size = static_cast<std::size_t>(config.population_size);
  const auto elites = static_cast<std::size_t>(config.elitism);
  const std::size_t offspring =
      std::min(static_cast<std::size_t>(config.mating_pool), pop_size - elites);

  std::vector<Member> population(pop_size);
  population[0].genome = initial;
  for (std::size_t i = 1; i < pop_size; ++i) {
    population[i].genome = initial;
    mutate(population[i].genome, rng, config.mutation_prob);
  }

  GARun run;
  std::vector<double> fitnesses(pop_size);
  for (long generation = 0;; ++generation) {
    GenerationStats stats;
    stats.generation = generation;
    stats.evaluations = evaluate(population, fitness_fn, config.threads);

    const auto order = ranking(population);
    const Member& best = population[order.front()];
    double sum = 0.0;
    for (std::size_t i = 0; i < pop_size; ++i) {
      fitnesses[i] = population[i].fitness;
      sum += fitnesses[i];
    }
    stats.best_fitness = best.fitness;
    stats.mean_fitness = sum / static_cast<double>(pop_size);
    run.history.push_back(stats);
    if (generation == 0 || best.fitness > run.best_fitness) {
      run.best_fitness = best.fitness;
      run.best_genome = best.genome;
    }
    run.generations_used = generation;

    if (run.best_fitness >= config.target_fitness) {
      run.terminated_by = Termination::target_reached;
      break;
    }
    if (generation >= config.max_iterations) {
      run.terminated_by = Termination::max_iterations;
      break;
    }
    if (progress && !progress(stats)) {
      run.terminated_by = Termination::max_iterations;
      break;
    }

    const auto pool = config.selection == Selection::roulette
                          ? roulette_select(fitnesses, offspring, rng)
                          : tournament_select(fitnesses, offspring, config.tournament_size, rng);

    std::vector<Member> next;
    next.reserve(pop_size);
    for (std::size_t e = 0; e < elites; ++e) next.push_back(population[order[e]]);
    for (std::size_t k = 0; next.size() < elites + offspring; k += 2) {
      const Genome& a = population[pool[k % pool.size()]].genome;
      const Genome& b = population[pool[(k + 1) % pool.size()]].genome;
      auto [c1, c2] = crossover(a, b, rng, config.crossover_prob, config.crossover);
      for (Genome* child : {&c1, &c2}) {
        if (next.size() == elites + offspring) break;
        mutate(*child, rng, config.mutation_prob);
        next.push_back(Member{std::move(*child), 0.0, false});
      }
    }
    for (std::size_t r = elites; next.size() < pop_size; ++r) {
      Member survivor{population[order[r]].genome, 0.0, false};
      mutate(survivor.genome, rng, config.mutation_prob);
      next.push_back(std::move(survivor));
    }
    population = std::move(next);
  }
  return run;
}

}  // namespace sfq::ga
