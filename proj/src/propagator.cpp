#include "sfq/propagator.hpp"

#include <cmath>
#include <string>

#include "sfq/error.hpp"

namespace sfq {

namespace {

// Tolerance on the Hermiticity pre-check is relative to the matrix scale:
// generators are in rad/s (~1e10), so an absolute 1e-12 is meaningless there.
constexpr double kHermitianTol = 1e-12;

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 2 || m.rows() > kMaxDim) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " must be square with 2 <= dim <= 8, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace

double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double unitarity_defect(const ComplexMatrix& u) {
  const ComplexMatrix id = ComplexMatrix::Identity(u.rows(), u.cols());
  return max_abs(u.adjoint() * u - id);
}

double hermiticity_defect(const ComplexMatrix& h) { return max_abs(h - h.adjoint()); }

ComplexMatrix nearest_unitary(const ComplexMatrix& u) {
  const Eigen::JacobiSVD<ComplexMatrix> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t) {
  require_square(h, "generator");
  const double scale = std::max(1.0, max_abs(h));
  if (hermiticity_defect(h) >= kHermitianTol * scale) {
    throw Error(ErrorCode::NonHermitianInput,
                "generator deviates from its adjoint by " + std::to_string(hermiticity_defect(h)));
  }
  if (!std::isfinite(t)) {
    throw Error(ErrorCode::InvalidParams, "duration must be finite");
  }
  // Symmetrize so the solver sees an exactly Hermitian input.
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  const RealVector& lambda = solver.eigenvalues();
  const ComplexMatrix& v = solver.eigenvectors();
  ComplexMatrix scaled = v;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    // Forming the phase from (lambda*t) keeps exp(-iH(-t)) the exact conjugate.
    scaled.col(k) *= std::polar(1.0, -lambda(k) * t);
  }
  return scaled * v.adjoint();
}

ComplexMatrix ordered_propagator(const HamiltonianSampler& sampler, double t_start, double t_end,
                                 int substeps) {
  if (!(t_end > t_start)) {
    throw Error(ErrorCode::InvalidParams, "ordered_propagator needs t_end > t_start");
  }
  if (substeps < 1) {
    throw Error(ErrorCode::InvalidParams, "ordered_propagator needs substeps >= 1");
  }
  const double h = (t_end - t_start) / substeps;
  ComplexMatrix u;
  for (int s = 0; s < substeps; ++s) {
    const ComplexMatrix gen = sampler(t_start + (s + 0.5) * h);
    if (s == 0) {
      require_square(gen, "sampled Hamiltonian");
      u = ComplexMatrix::Identity(gen.rows(), gen.cols());
    } else if (gen.rows() != u.rows() || gen.cols() != u.cols()) {
      throw Error(ErrorCode::DimensionMismatch, "sampler returned inconsistent dimensions at step " +
                                                    std::to_string(s));
    }
    u = expm_hermitian(gen, h) * u;
  }
  return nearest_unitary(u);
}

}  // namespace sfq
