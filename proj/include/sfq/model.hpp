#pragma once

#include <iosfwd>
#include <numbers>
#include <string>

#include "sfq/propagator.hpp"

namespace sfq {

/// Default number of midpoint substeps per pulse window; also the Simpson
/// grid on which the pulse area is normalized.
inline constexpr int kDefaultSubsteps = 4000;

/// Physical constants of the driven transmon. Internal units are SI:
/// angular frequencies in rad/s, times in seconds.
struct ModelParams {
  double omega = 2.0 * std::numbers::pi * 5.0e9;   // qubit transition
  double delta = 2.0 * std::numbers::pi * -0.2e9;  // anharmonicity
  double dtheta = std::numbers::pi / 100.0;        // pulse area
  double t_c = 5.0e-12;                            // half window; pixel = 2 t_c
  double tau = 5.0e-12 / 3.0;                      // Gaussian standard deviation
  int levels = 3;

  double pixel() const { return 2.0 * t_c; }

  /// Throws Error(InvalidParams) naming the first violated invariant.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Lower bound on the number of pulses for a pi rotation, ceil(pi / dtheta).
int min_pulse_count(const ModelParams& params);

/// diag(k*omega + k(k-1)*delta/2), k = 0..levels-1
ComplexMatrix build_drift(const ModelParams& params);

/// Tridiagonal coupling with <k|H1|k+1> = -i sqrt(k+1)/2 and its adjoint below.
ComplexMatrix build_control(int levels);

/// Truncated Gaussian u(t) on [-t_c, t_c] whose Simpson-quadrature area on the
/// kDefaultSubsteps grid is exactly dtheta.
class PulseShape {
 public:
  explicit PulseShape(const ModelParams& params);

  /// Amplitude in rad/s. Throws Error(OutOfWindow) for |t| > t_c.
  double operator()(double t) const;

  double peak() const { return peak_; }
  double t_c() const { return t_c_; }

 private:
  double peak_;
  double t_c_;
  double tau_;
};

inline double pulse_amplitude(double t, const ModelParams& params) { return PulseShape(params)(t); }

/// Composite Simpson rule of u over [-t_c, t_c] with `intervals` (rounded up to even).
double pulse_area(const PulseShape& pulse, int intervals);

/// exp(-i H0 t); t may be negative.
ComplexMatrix free_evolution(const ModelParams& params, double t);

/// The two precompiled pixel propagators.
struct UnitaryDatabase {
  ComplexMatrix u0;  // free evolution over one pixel
  ComplexMatrix u1;  // one pixel containing a centred pulse
  ModelParams params;
  int substeps = kDefaultSubsteps;

  int dim() const { return static_cast<int>(u0.rows()); }
};

/// Lab-frame H(t) = H0 + u(t) H1 for a pulse centred at t = 0.
HamiltonianSampler pulse_hamiltonian(const ModelParams& params);

UnitaryDatabase build_database(const ModelParams& params, int substeps = kDefaultSubsteps);

/// Versioned text format: header, params, substeps, then row-major entries
/// as decimal pairs with 17 significant digits.
void write_database(std::ostream& out, const UnitaryDatabase& db);
UnitaryDatabase read_database(std::istream& in);
void save_database(const std::string& path, const UnitaryDatabase& db);
UnitaryDatabase load_database(const std::string& path);

}  // namespace sfq
