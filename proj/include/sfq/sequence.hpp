#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sfq/model.hpp"

namespace sfq {

using Bit = std::uint8_t;
using Genome = std::vector<Bit>;

/// Binary pulse train on a uniform pixel grid: 1 = pulse, 0 = free evolution.
class PulseSequence {
 public:
  PulseSequence() = default;
  /// Throws Error(InvalidParams) for entries outside {0, 1} or a non-positive pixel.
  PulseSequence(Genome bits, double pixel);

  std::span<const Bit> bits() const { return bits_; }
  const Genome& genome() const { return bits_; }
  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  double pixel() const { return pixel_; }
  double gate_time() const { return static_cast<double>(bits_.size()) * pixel_; }
  std::size_t pulse_count() const;

  /// This sequence followed by `later`.
  PulseSequence concat(const PulseSequence& later) const;

  /// "0101..." rendering.
  std::string to_string() const;

  friend bool operator==(const PulseSequence&, const PulseSequence&) = default;

 private:
  Genome bits_;
  double pixel_ = 0.0;
};

/// Pauli-Y on the qubit block, e^{i phi} on every leakage level.
struct TargetGate {
  ComplexMatrix matrix;
  int qubit_dim = 2;
  double leak_phase = 0.0;

  static TargetGate pauli_y(int levels, double leak_phase = 0.0);
};

/// Evenly spaced seed train: one pulse per qubit precession period
/// (spacing rounded to whole pixels), n_pulses * spacing pixels in total.
PulseSequence initial_sequence(const ModelParams& params, int n_pulses);

/// Pixels per precession period, round((2 pi / omega) / pixel).
int precession_spacing(const ModelParams& params);

/// Reference product U(t_{N-1}) ... U(t_0) with full d x d matrices.
ComplexMatrix evolve(const PulseSequence& seq, const UnitaryDatabase& db);

/// 1/4 |Tr(U_target^dagger P_Q U P_Q)|^2
double fidelity(const ComplexMatrix& u, const TargetGate& target);

/// Row i holds the level occupations after i pixels; N+1 rows of d entries.
std::vector<std::vector<double>> populations(const PulseSequence& seq, const UnitaryDatabase& db,
                                             int initial_level);

/// Sequence file: `# pixel_ps=<p> gate_ns=<g>` header, then one line of '0'/'1'.
void write_sequence(std::ostream& out, const PulseSequence& seq);
PulseSequence read_sequence(std::istream& in);
void save_sequence(const std::string& path, const PulseSequence& seq);
PulseSequence load_sequence(const std::string& path);

/// CSV with header `pixel,time_ns,p0,p1,...`.
void write_populations_csv(std::ostream& out, const std::vector<std::vector<double>>& rows,
                           double pixel);

}  // namespace sfq
