#include "sfq/experiments.hpp"

#include <cmath>
#include <exception>
#include <iomanip>
#include <ostream>
#include <random>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sfq/error.hpp"

namespace sfq {

namespace {

// SplitMix64 finalizer; decorrelates per-run seeds derived from (seed, run).
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double run_error(const PulseSequence& seq, const FidelityKernel& kernel, const JitterSpec& spec,
                 std::size_t pulses, std::uint64_t run) {
  if (spec.sigma == 0.0) return kernel.error(seq.bits());
  const auto delays = draw_delays(spec, run, pulses);
  return 1.0 - kernel.fidelity_with_delays(seq.bits(), delays);
}

JitterResult summarize(const std::vector<double>& errors) {
  JitterResult r;
  r.runs = static_cast<int>(errors.size());
  // Welford: constant samples give an exact mean and zero spread.
  double mean = 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const double d = errors[i] - mean;
    mean += d / static_cast<double>(i + 1);
    ss += d * (errors[i] - mean);
  }
  r.mean_error = mean;
  r.std_error = errors.size() > 1 ? std::sqrt(ss / static_cast<double>(errors.size() - 1)) : 0.0;
  return r;
}

void check_inputs(const PulseSequence& seq, const FidelityKernel& kernel, const JitterSpec& spec) {
  spec.validate();
  kernel.require_fits(seq.size());
}

}  // namespace

std::string_view to_string(JitterMode m) {
  return m == JitterMode::external ? "external" : "internal";
}

std::string_view to_string(InternalModel m) {
  return m == InternalModel::independent_sqrt_k ? "independent_sqrt_k" : "random_walk";
}

void JitterSpec::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::InvalidConfig, "sigma >= 0 violated");
  }
  if (runs < 1) throw Error(ErrorCode::InvalidConfig, "runs >= 1 violated");
}

double JitterResult::standard_error() const {
  return runs > 0 ? std_error / std::sqrt(static_cast<double>(runs)) : 0.0;
}

ComplexMatrix jittered_pulse(const UnitaryDatabase& db, double delta_t) {
  if (delta_t == 0.0) return db.u1;
  return free_evolution(db.params, -delta_t) * db.u1 * free_evolution(db.params, delta_t);
}

std::vector<double> draw_delays(const JitterSpec& spec, std::uint64_t run, std::size_t pulses) {
  ga::Rng rng(mix64(spec.seed ^ mix64(run)));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> delays(pulses);
  double walk = 0.0;
  for (std::size_t k = 0; k < pulses; ++k) {
    const double z = normal(rng);
    if (spec.mode == JitterMode::external) {
      delays[k] = spec.sigma * z;
    } else if (spec.internal_model == InternalModel::independent_sqrt_k) {
      delays[k] = std::sqrt(static_cast<double>(k + 1)) * spec.sigma * z;
    } else {
      walk += spec.sigma * z;
      delays[k] = walk;
    }
  }
  return delays;
}

ComplexMatrix evolve_jittered(const PulseSequence& seq, const UnitaryDatabase& db,
                              std::span<const double> delays) {
  if (seq.empty()) throw Error(ErrorCode::EmptySequence, "cannot evolve an empty sequence");
  if (delays.size() < seq.pulse_count()) {
    throw Error(ErrorCode::LengthMismatch, "fewer delays than pulses");
  }
  ComplexMatrix u = ComplexMatrix::Identity(db.dim(), db.dim());
  std::size_t pulse = 0;
  for (Bit b : seq.bits()) {
    u = (b ? jittered_pulse(db, delays[pulse++]) : db.u0) * u;
  }
  return u;
}

JitterResult jitter_eval(const PulseSequence& seq, const FidelityKernel& kernel,
                         const JitterSpec& spec, int threads) {
  check_inputs(seq, kernel, spec);
  const std::size_t pulses = seq.pulse_count();
  std::vector<double> errors(static_cast<std::size_t>(spec.runs));
  std::exception_ptr failure;
#ifdef _OPENMP
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(team)
#endif
  for (int r = 0; r < spec.runs; ++r) {
    try {
      errors[static_cast<std::size_t>(r)] =
          run_error(seq, kernel, spec, pulses, static_cast<std::uint64_t>(r));
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(sfq_jitter_failure)
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  (void)threads;
  if (failure) std::rethrow_exception(failure);
  return summarize(errors);
}

JitterResult jitter_eval_serial(const PulseSequence& seq, const FidelityKernel& kernel,
                                const JitterSpec& spec) {
  check_inputs(seq, kernel, spec);
  const std::size_t pulses = seq.pulse_count();
  std::vector<double> errors;
  errors.reserve(static_cast<std::size_t>(spec.runs));
  for (int r = 0; r < spec.runs; ++r) {
    errors.push_back(run_error(seq, kernel, spec, pulses, static_cast<std::uint64_t>(r)));
  }
  return summarize(errors);
}

JitterResult jitter_eval(const PulseSequence& seq, const UnitaryDatabase& db,
                         const TargetGate& target, const JitterSpec& spec, int threads) {
  const FidelityKernel kernel(db, target, seq.size());
  return jitter_eval(seq, kernel, spec, threads);
}

std::size_t pixels_for_gate_time(double gate_time, double pixel) {
  const double ratio = gate_time / pixel;
  const double whole = std::round(ratio);
  if (!(gate_time > 0.0) || whole < 1.0 || std::abs(ratio - whole) > 1e-6) {
    throw Error(ErrorCode::NonIntegerPixelCount,
                "gate time " + std::to_string(gate_time * 1e9) +
                    " ns is not a positive whole number of pixels");
  }
  return static_cast<std::size_t>(whole);
}

PulseSequence spaced_sequence(const ModelParams& params, std::size_t pixels) {
  if (pixels == 0) throw Error(ErrorCode::EmptySequence, "sequence needs at least one pixel");
  const auto spacing = static_cast<std::size_t>(precession_spacing(params));
  Genome bits(pixels, 0);
  for (std::size_t i = 0; i < pixels; i += spacing) bits[i] = 1;
  return PulseSequence(std::move(bits), params.pixel());
}

SweepResult speed_limit_sweep(std::span<const double> gate_times, const UnitaryDatabase& db,
                              const TargetGate& target, const ga::GAConfig& config) {
  config.validate();
  const double pixel = db.params.pixel();
  std::vector<std::size_t> sizes;
  for (double t : gate_times) sizes.push_back(pixels_for_gate_time(t, pixel));

  SweepResult result;
  for (std::size_t i = 0; i < gate_times.size(); ++i) {
    const PulseSequence seed = spaced_sequence(db.params, sizes[i]);
    const FidelityKernel kernel(db, target, seed.size());
    const auto run = ga::optimize(
        seed.genome(), [&kernel](std::span<const Bit> bits) { return kernel.fidelity(bits); },
        config);
    SweepRow row;
    row.gate_time = gate_times[i];
    row.pixels = sizes[i];
    row.best_error = 1.0 - run.best_fitness;
    row.generations = run.generations_used;
    row.terminated_by = run.terminated_by;
    row.best = PulseSequence(run.best_genome, pixel);
    result.rows.push_back(std::move(row));
  }
  return result;
}

void write_qsl_csv(std::ostream& out, const SweepResult& result) {
  out << "gate_ns,pixels,best_error,generations\n";
  for (const auto& row : result.rows) {
    out << std::setprecision(15) << row.gate_time * 1e9 << ',' << row.pixels << ','
        << std::setprecision(17) << row.best_error << ',' << row.generations << '\n';
  }
}

void write_jitter_csv(std::ostream& out, std::span<const JitterRow> rows) {
  out << "sigma_ps,mode,mean_error,std_error,runs\n";
  for (const auto& row : rows) {
    out << std::setprecision(15) << row.sigma * 1e12 << ',' << to_string(row.mode) << ','
        << std::setprecision(17) << row.result.mean_error << ',' << row.result.std_error << ','
        << row.result.runs << '\n';
  }
}

}  // namespace sfq
