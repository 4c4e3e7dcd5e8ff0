#pragma once

#include <span>
#include <vector>

#include "sfq/sequence.hpp"

namespace sfq {

/// Fast fidelity evaluation for bit strings against one database and target.
///
/// Only the qubit columns of U matter for the projected fidelity, so the
/// kernel propagates a d x 2 block. A run of L zeros followed by a pulse is
/// the single matrix u1 * u0^L, precomputed for every L up to max_length;
/// u0 must be diagonal (it is, for the drift Hamiltonian). Cost per genome is
/// O(N + n d^2) for n pulses instead of O(N d^3).
///
/// Immutable after construction and safe to share between threads.
class FidelityKernel {
 public:
  FidelityKernel(const UnitaryDatabase& db, const TargetGate& target, std::size_t max_length);

  double fidelity(std::span<const Bit> bits) const;
  double error(std::span<const Bit> bits) const { return 1.0 - fidelity(bits); }

  /// Fidelity when the k-th applied pulse arrives `delays[k]` seconds late
  /// (negative: early), i.e. u1 is replaced by U0(-dt) u1 U0(dt).
  double fidelity_with_delays(std::span<const Bit> bits, std::span<const double> delays) const;

  /// Throws unless 1 <= n <= max_length().
  void require_fits(std::size_t n) const;

  std::size_t max_length() const { return max_length_; }
  int dim() const { return dim_; }

 private:
  using Block = Eigen::Matrix<Complex, Eigen::Dynamic, 2, Eigen::ColMajor, kMaxDim, 2>;

  double block_fidelity(const Block& s) const;

  int dim_;
  std::size_t max_length_;
  RealVector energies_;
  double pixel_;
  ComplexMatrix u1_;
  ComplexMatrix target_block_;
  std::vector<ComplexVector> free_powers_;    // diag(u0)^L
  std::vector<ComplexMatrix> pulse_after_;    // u1 * u0^L
};

/// Fidelities of many genomes, OpenMP-parallel over genomes. Results are
/// written by genome index so the output does not depend on the schedule.
/// threads <= 0 keeps the OpenMP default.
std::vector<double> evaluate_population(const FidelityKernel& kernel,
                                        std::span<const Genome> genomes, int threads = 0);

/// Serial reference for evaluate_population.
std::vector<double> evaluate_population_serial(const FidelityKernel& kernel,
                                               std::span<const Genome> genomes);

/// Sets the OpenMP team size used by the parallel kernels (no-op without OpenMP).
void set_thread_count(int threads);
int max_threads();

}  // namespace sfq
