#include "sfq/kernels.hpp"

#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sfq/error.hpp"

namespace sfq {

FidelityKernel::FidelityKernel(const UnitaryDatabase& db, const TargetGate& target,
                               std::size_t max_length)
    : dim_(db.dim()), max_length_(max_length), pixel_(db.params.pixel()), u1_(db.u1) {
  if (target.matrix.rows() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "kernel: target and database differ in size");
  }
  const ComplexMatrix drift = build_drift(db.params);
  energies_ = drift.diagonal().real();
  const ComplexMatrix off_diag = db.u0 - ComplexMatrix(db.u0.diagonal().asDiagonal());
  if (max_abs(off_diag) > 1e-12) {
    throw Error(ErrorCode::InvalidParams, "kernel requires a diagonal free-evolution entry");
  }
  target_block_ = target.matrix.topLeftCorner(target.qubit_dim, target.qubit_dim);

  const ComplexVector step = db.u0.diagonal();
  free_powers_.reserve(max_length + 1);
  pulse_after_.reserve(max_length + 1);
  ComplexVector power = ComplexVector::Ones(dim_);
  for (std::size_t len = 0; len <= max_length; ++len) {
    free_powers_.push_back(power);
    pulse_after_.push_back(u1_ * power.asDiagonal());
    power = power.cwiseProduct(step);
  }
}

void FidelityKernel::require_fits(std::size_t n) const {
  if (n == 0) throw Error(ErrorCode::EmptySequence, "kernel: empty genome");
  if (n > max_length_) {
    throw Error(ErrorCode::LengthMismatch, "kernel: genome of " + std::to_string(n) +
                                               " pixels exceeds " + std::to_string(max_length_));
  }
}

double FidelityKernel::block_fidelity(const Block& s) const {
  Complex tr = 0.0;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) tr += std::conj(target_block_(j, k)) * s(j, k);
  }
  return 0.25 * std::norm(tr);
}

double FidelityKernel::fidelity(std::span<const Bit> bits) const {
  require_fits(bits.size());
  Block s = Block::Zero(dim_, 2);
  s(0, 0) = 1.0;
  s(1, 1) = 1.0;
  std::size_t run = 0;
  for (Bit b : bits) {
    if (b) {
      s = pulse_after_[run] * s;
      run = 0;
    } else {
      ++run;
    }
  }
  s = free_powers_[run].asDiagonal() * s;
  return block_fidelity(s);
}

double FidelityKernel::fidelity_with_delays(std::span<const Bit> bits,
                                            std::span<const double> delays) const {
  require_fits(bits.size());
  Block s = Block::Zero(dim_, 2);
  s(0, 0) = 1.0;
  s(1, 1) = 1.0;
  std::size_t run = 0;
  std::size_t pulse = 0;
  ComplexVector phase(dim_);
  for (Bit b : bits) {
    if (!b) {
      ++run;
      continue;
    }
    if (pulse >= delays.size()) {
      throw Error(ErrorCode::LengthMismatch, "kernel: fewer delays than pulses");
    }
    const double dt = delays[pulse++];
    if (dt == 0.0) {
      s = pulse_after_[run] * s;
      run = 0;
      continue;
    }
    // U0(dt) u0^L is diagonal with phases exp(-i E (dt + L pixel)).
    const double elapsed = dt + static_cast<double>(run) * pixel_;
    for (int k = 0; k < dim_; ++k) phase(k) = std::polar(1.0, -energies_(k) * elapsed);
    s = phase.asDiagonal() * s;
    s = u1_ * s;
    for (int k = 0; k < dim_; ++k) phase(k) = std::polar(1.0, energies_(k) * dt);
    s = phase.asDiagonal() * s;
    run = 0;
  }
  s = free_powers_[run].asDiagonal() * s;
  return block_fidelity(s);
}

std::vector<double> evaluate_population(const FidelityKernel& kernel,
                                        std::span<const Genome> genomes, int threads) {
  std::vector<double> out(genomes.size());
  const auto n = static_cast<std::ptrdiff_t>(genomes.size());
  // Exceptions must not escape the parallel region.
  for (const auto& g : genomes) kernel.require_fits(g.size());
#ifdef _OPENMP
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(team)
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = kernel.fidelity(genomes[static_cast<std::size_t>(i)]);
  }
  (void)threads;
  return out;
}

std::vector<double> evaluate_population_serial(const FidelityKernel& kernel,
                                               std::span<const Genome> genomes) {
  std::vector<double> out;
  out.reserve(genomes.size());
  for (const auto& g : genomes) out.push_back(kernel.fidelity(g));
  return out;
}

void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace sfq
