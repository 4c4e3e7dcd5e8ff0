#include "sfq/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "sfq/error.hpp"

namespace sfq {

PulseSequence::PulseSequence(Genome bits, double pixel) : bits_(std::move(bits)), pixel_(pixel) {
  if (!(pixel_ > 0.0) || !std::isfinite(pixel_)) {
    throw Error(ErrorCode::InvalidParams, "pixel duration must be positive");
  }
  if (std::any_of(bits_.begin(), bits_.end(), [](Bit b) { return b > 1; })) {
    throw Error(ErrorCode::InvalidParams, "sequence entries must be 0 or 1");
  }
}

std::size_t PulseSequence::pulse_count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), Bit{1}));
}

PulseSequence PulseSequence::concat(const PulseSequence& later) const {
  if (pixel_ != later.pixel_) {
    throw Error(ErrorCode::LengthMismatch, "cannot concatenate sequences with different pixels");
  }
  Genome joined = bits_;
  joined.insert(joined.end(), later.bits_.begin(), later.bits_.end());
  return PulseSequence(std::move(joined), pixel_);
}

std::string PulseSequence::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) s[i] = '1';
  }
  return s;
}

TargetGate TargetGate::pauli_y(int levels, double leak_phase) {
  if (levels < 2 || levels > kMaxDim) {
    throw Error(ErrorCode::DimensionMismatch, "target needs 2 <= levels <= 8");
  }
  TargetGate t;
  t.leak_phase = leak_phase;
  t.matrix = ComplexMatrix::Zero(levels, levels);
  t.matrix(0, 1) = -1.0;
  t.matrix(1, 0) = 1.0;
  for (int k = 2; k < levels; ++k) t.matrix(k, k) = std::polar(1.0, leak_phase);
  return t;
}

int precession_spacing(const ModelParams& params) {
  params.validate();
  const double period = 2.0 * std::numbers::pi / params.omega;
  if (period < params.pixel()) {
    throw Error(ErrorCode::PeriodTooShort, "precession period is shorter than one pixel");
  }
  return static_cast<int>(std::lround(period / params.pixel()));
}

PulseSequence initial_sequence(const ModelParams& params, int n_pulses) {
  if (n_pulses < 1) throw Error(ErrorCode::InvalidParams, "n_pulses >= 1 violated");
  const int spacing = precession_spacing(params);
  Genome bits(static_cast<std::size_t>(n_pulses) * spacing, 0);
  for (int k = 0; k < n_pulses; ++k) bits[static_cast<std::size_t>(k) * spacing] = 1;
  return PulseSequence(std::move(bits), params.pixel());
}

ComplexMatrix evolve(const PulseSequence& seq, const UnitaryDatabase& db) {
  if (seq.empty()) throw Error(ErrorCode::EmptySequence, "cannot evolve an empty sequence");
  ComplexMatrix u = ComplexMatrix::Identity(db.dim(), db.dim());
  for (Bit b : seq.bits()) u = (b ? db.u1 : db.u0) * u;
  return u;
}

double fidelity(const ComplexMatrix& u, const TargetGate& target) {
  if (u.rows() != target.matrix.rows() || u.cols() != target.matrix.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "fidelity: unitary and target differ in size");
  }
  Complex tr = 0.0;
  for (int j = 0; j < target.qubit_dim; ++j) {
    for (int k = 0; k < target.qubit_dim; ++k) tr += std::conj(target.matrix(j, k)) * u(j, k);
  }
  return 0.25 * std::norm(tr);
}

std::vector<std::vector<double>> populations(const PulseSequence& seq, const UnitaryDatabase& db,
                                             int initial_level) {
  const int d = db.dim();
  if (initial_level < 0 || initial_level >= d) {
    throw Error(ErrorCode::InvalidParams, "initial level out of range");
  }
  ComplexVector psi = ComplexVector::Zero(d);
  psi(initial_level) = 1.0;
  std::vector<std::vector<double>> rows;
  rows.reserve(seq.size() + 1);
  auto record = [&] {
    std::vector<double> row(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) row[static_cast<std::size_t>(k)] = std::norm(psi(k));
    rows.push_back(std::move(row));
  };
  record();
  for (Bit b : seq.bits()) {
    psi = (b ? db.u1 : db.u0) * psi;
    record();
  }
  return rows;
}

void write_sequence(std::ostream& out, const PulseSequence& seq) {
  // Default stream formatting prints 10 and 20 rather than 10.000000.
  std::ostringstream header;
  header << std::setprecision(15) << "# pixel_ps=" << seq.pixel() * 1e12
         << " gate_ns=" << seq.gate_time() * 1e9;
  out << header.str() << '\n' << seq.to_string() << '\n';
}

PulseSequence read_sequence(std::istream& in) {
  std::string line;
  double pixel_ps = 0.0;
  std::string body;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream fields(line.substr(1));
      std::string field;
      while (fields >> field) {
        const auto eq = field.find('=');
        if (eq != std::string::npos && field.substr(0, eq) == "pixel_ps") {
          try {
            pixel_ps = std::stod(field.substr(eq + 1));
          } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "bad pixel_ps value '" + field + "'");
          }
        }
      }
      continue;
    }
    body += line;
  }
  if (!(pixel_ps > 0.0)) throw Error(ErrorCode::ParseError, "sequence header lacks pixel_ps");
  Genome bits;
  bits.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    if (c != '0' && c != '1') {
      throw Error(ErrorCode::ParseError,
                  "malformed sequence character '" + std::string(1, c) + "' at offset " +
                      std::to_string(i));
    }
    bits.push_back(static_cast<Bit>(c - '0'));
  }
  if (bits.empty()) throw Error(ErrorCode::EmptySequence, "sequence file contains no pixels");
  return PulseSequence(std::move(bits), pixel_ps * 1e-12);
}

void save_sequence(const std::string& path, const PulseSequence& seq) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  write_sequence(out, seq);
}

PulseSequence load_sequence(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return read_sequence(in);
}

void write_populations_csv(std::ostream& out, const std::vector<std::vector<double>>& rows,
                           double pixel) {
  const std::size_t d = rows.empty() ? 0 : rows.front().size();
  out << "pixel,time_ns";
  for (std::size_t k = 0; k < d; ++k) out << ",p" << k;
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << i << ',' << std::setprecision(12) << static_cast<double>(i) * pixel * 1e9
        << std::setprecision(17);
    for (double p : rows[i]) out << ',' << p;
    out << '\n';
  }
}

}  // namespace sfq
