#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "sfq/ga.hpp"
#include "sfq/kernels.hpp"

namespace sfq {

enum class JitterMode { external, internal };

/// How internal-clock delays of successive pulses relate. Both give the
/// k-th pulse a delay of standard deviation sqrt(k) * sigma.
enum class InternalModel {
  independent_sqrt_k,  // independent draws N(0, k sigma^2)
  random_walk,         // dt_k = dt_{k-1} + N(0, sigma^2)
};

std::string_view to_string(JitterMode m);
std::string_view to_string(InternalModel m);

struct JitterSpec {
  double sigma = 0.0;  // seconds
  JitterMode mode = JitterMode::external;
  int runs = 1000;
  std::uint64_t seed = 1;
  InternalModel internal_model = InternalModel::independent_sqrt_k;

  void validate() const;
};

struct JitterResult {
  double mean_error = 0.0;
  double std_error = 0.0;  // sample standard deviation over runs
  int runs = 0;

  /// Standard error of the mean.
  double standard_error() const;
};

/// U0(-dt) u1 U0(dt): the pulse pixel when the pulse arrives dt late.
ComplexMatrix jittered_pulse(const UnitaryDatabase& db, double delta_t);

/// Per-pulse delays for Monte-Carlo run `run`. The stream depends only on
/// (spec.seed, run), never on which thread draws it.
std::vector<double> draw_delays(const JitterSpec& spec, std::uint64_t run, std::size_t pulses);

/// Full-matrix reference: evolve with the k-th pulse replaced by
/// jittered_pulse(db, delays[k]).
ComplexMatrix evolve_jittered(const PulseSequence& seq, const UnitaryDatabase& db,
                              std::span<const double> delays);

/// Mean and spread of 1 - fidelity over spec.runs jitter realizations,
/// OpenMP-parallel over runs.
JitterResult jitter_eval(const PulseSequence& seq, const FidelityKernel& kernel,
                         const JitterSpec& spec, int threads = 0);

/// Serial reference for jitter_eval; bitwise identical results.
JitterResult jitter_eval_serial(const PulseSequence& seq, const FidelityKernel& kernel,
                                const JitterSpec& spec);

/// Convenience overload that builds the kernel for `seq`.
JitterResult jitter_eval(const PulseSequence& seq, const UnitaryDatabase& db,
                         const TargetGate& target, const JitterSpec& spec, int threads = 0);

struct SweepRow {
  double gate_time = 0.0;  // seconds
  std::size_t pixels = 0;
  double best_error = 1.0;
  long generations = 0;
  ga::Termination terminated_by = ga::Termination::max_iterations;
  PulseSequence best;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// Pixel count of a gate time; throws NonIntegerPixelCount unless it is a
/// whole number of pixels.
std::size_t pixels_for_gate_time(double gate_time, double pixel);

/// Evenly spaced seed train cut (or extended) to `pixels` pixels, keeping
/// one pulse per precession period.
PulseSequence spaced_sequence(const ModelParams& params, std::size_t pixels);

/// One GA run per gate time, each seeded from spaced_sequence.
SweepResult speed_limit_sweep(std::span<const double> gate_times, const UnitaryDatabase& db,
                              const TargetGate& target, const ga::GAConfig& config);

/// `gate_ns,pixels,best_error,generations`
void write_qsl_csv(std::ostream& out, const SweepResult& result);

struct JitterRow {
  double sigma = 0.0;
  JitterMode mode = JitterMode::external;
  JitterResult result;
};

/// `sigma_ps,mode,mean_error,std_error,runs`
void write_jitter_csv(std::ostream& out, std::span<const JitterRow> rows);

}  // namespace sfq
