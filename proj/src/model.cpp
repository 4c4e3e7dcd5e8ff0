#include "sfq/model.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "sfq/error.hpp"

namespace sfq {

namespace {

constexpr const char* kDbMagic = "sfq-unitary-db";
constexpr int kDbVersion = 1;

void fail_params(const std::string& what) { throw Error(ErrorCode::InvalidParams, what); }

double gaussian(double t, double tau) { return std::exp(-t * t / (2.0 * tau * tau)); }

}  // namespace

void ModelParams::validate() const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(omega) || !finite(delta) || !finite(dtheta) || !finite(t_c) || !finite(tau)) {
    fail_params("all model parameters must be finite");
  }
  if (!(omega > 0.0)) fail_params("omega > 0 violated");
  if (!(t_c > 0.0)) fail_params("t_c > 0 violated");
  if (!(tau > 0.0)) fail_params("tau > 0 violated");
  if (!(dtheta > 0.0 && dtheta < std::numbers::pi)) fail_params("0 < dtheta < pi violated");
  // Small relative slack so tau = t_c/3 entered in rounded units still passes.
  if (tau > t_c / 3.0 * (1.0 + 1e-12)) fail_params("tau <= t_c/3 violated");
  if (levels < 2 || levels > kMaxDim) fail_params("2 <= levels <= 8 violated");
}

int min_pulse_count(const ModelParams& params) {
  params.validate();
  // pi / (pi/100) evaluates to 100.00000000000001; absorb the rounding.
  return static_cast<int>(std::ceil(std::numbers::pi / params.dtheta - 1e-9));
}

ComplexMatrix build_drift(const ModelParams& params) {
  params.validate();
  const int d = params.levels;
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    h(k, k) = k * params.omega + 0.5 * k * (k - 1) * params.delta;
  }
  return h;
}

ComplexMatrix build_control(int levels) {
  if (levels < 2 || levels > kMaxDim) fail_params("2 <= levels <= 8 violated");
  ComplexMatrix h = ComplexMatrix::Zero(levels, levels);
  for (int k = 0; k + 1 < levels; ++k) {
    const double g = 0.5 * std::sqrt(static_cast<double>(k + 1));
    h(k, k + 1) = Complex(0.0, -g);
    h(k + 1, k) = Complex(0.0, g);
  }
  return h;
}

PulseShape::PulseShape(const ModelParams& params) : peak_(1.0), t_c_(params.t_c), tau_(params.tau) {
  params.validate();
  peak_ = params.dtheta / pulse_area(*this, kDefaultSubsteps);
}

double PulseShape::operator()(double t) const {
  // Grid points computed as -t_c + k*h may overshoot the edge by an ulp.
  if (std::abs(t) > t_c_ * (1.0 + 1e-12)) {
    throw Error(ErrorCode::OutOfWindow, "pulse sampled outside [-t_c, t_c]");
  }
  return peak_ * gaussian(t, tau_);
}

double pulse_area(const PulseShape& pulse, int intervals) {
  const int n = intervals + (intervals % 2);
  const double a = -pulse.t_c();
  const double h = 2.0 * pulse.t_c() / n;
  double sum = pulse(a) + pulse(pulse.t_c());
  for (int k = 1; k < n; ++k) {
    sum += (k % 2 == 1 ? 4.0 : 2.0) * pulse(a + k * h);
  }
  return sum * h / 3.0;
}

ComplexMatrix free_evolution(const ModelParams& params, double t) {
  return expm_hermitian(build_drift(params), t);
}

HamiltonianSampler pulse_hamiltonian(const ModelParams& params) {
  const ComplexMatrix h0 = build_drift(params);
  const ComplexMatrix h1 = build_control(params.levels);
  const PulseShape pulse(params);
  return [h0, h1, pulse](double t) -> ComplexMatrix { return h0 + pulse(t) * h1; };
}

UnitaryDatabase build_database(const ModelParams& params, int substeps) {
  params.validate();
  if (substeps < 1) fail_params("substeps >= 1 violated");
  UnitaryDatabase db;
  db.params = params;
  db.substeps = substeps;
  db.u0 = free_evolution(params, params.pixel());
  db.u1 = ordered_propagator(pulse_hamiltonian(params), -params.t_c, params.t_c, substeps);
  return db;
}

void write_database(std::ostream& out, const UnitaryDatabase& db) {
  const auto& p = db.params;
  out << kDbMagic << ' ' << kDbVersion << '\n';
  out << std::setprecision(17);
  out << "levels " << p.levels << '\n';
  out << "omega " << p.omega << '\n';
  out << "delta " << p.delta << '\n';
  out << "dtheta " << p.dtheta << '\n';
  out << "t_c " << p.t_c << '\n';
  out << "tau " << p.tau << '\n';
  out << "substeps " << db.substeps << '\n';
  for (const auto* entry : {&db.u0, &db.u1}) {
    out << (entry == &db.u0 ? "u0" : "u1") << '\n';
    for (Eigen::Index r = 0; r < entry->rows(); ++r) {
      for (Eigen::Index c = 0; c < entry->cols(); ++c) {
        out << (c == 0 ? "" : " ") << (*entry)(r, c).real() << ' ' << (*entry)(r, c).imag();
      }
      out << '\n';
    }
  }
}

UnitaryDatabase read_database(std::istream& in) {
  auto parse_fail = [](const std::string& what) {
    throw Error(ErrorCode::ParseError, "database: " + what);
  };
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kDbMagic) parse_fail("missing header");
  if (version != kDbVersion) parse_fail("unsupported version " + std::to_string(version));

  auto expect_key = [&](const char* key) {
    std::string k;
    if (!(in >> k) || k != key) parse_fail(std::string("expected key '") + key + "'");
  };
  auto read_double = [&](const char* key) {
    expect_key(key);
    double v = 0.0;
    if (!(in >> v)) parse_fail(std::string("bad value for ") + key);
    return v;
  };

  UnitaryDatabase db;
  expect_key("levels");
  if (!(in >> db.params.levels)) parse_fail("bad levels");
  db.params.omega = read_double("omega");
  db.params.delta = read_double("delta");
  db.params.dtheta = read_double("dtheta");
  db.params.t_c = read_double("t_c");
  db.params.tau = read_double("tau");
  expect_key("substeps");
  if (!(in >> db.substeps)) parse_fail("bad substeps");
  db.params.validate();

  const int d = db.params.levels;
  for (auto* entry : {&db.u0, &db.u1}) {
    expect_key(entry == &db.u0 ? "u0" : "u1");
    entry->resize(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        double re = 0.0;
        double im = 0.0;
        if (!(in >> re >> im)) parse_fail("truncated matrix data");
        (*entry)(r, c) = Complex(re, im);
      }
    }
  }
  return db;
}

void save_database(const std::string& path, const UnitaryDatabase& db) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  write_database(out, db);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

UnitaryDatabase load_database(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return read_database(in);
}

}  // namespace sfq
