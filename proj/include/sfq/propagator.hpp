#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace sfq {

using Complex = std::complex<double>;

inline constexpr int kMaxDim = 8;

/// Dense square complex matrix, at most 8x8; storage lives inline.
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using RealVector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

/// Time-dependent Hermitian generator H(t), t in seconds, entries in rad/s.
using HamiltonianSampler = std::function<ComplexMatrix(double)>;

/// max |A_ij|
double max_abs(const ComplexMatrix& a);

/// max |(U^dagger U - I)_ij|
double unitarity_defect(const ComplexMatrix& u);

/// max |(H - H^dagger)_ij|
double hermiticity_defect(const ComplexMatrix& h);

/// Unitary polar factor W V^dagger of u = W S V^dagger.
ComplexMatrix nearest_unitary(const ComplexMatrix& u);

/// exp(-i H t) through the eigendecomposition of H. Negative t is allowed;
/// exp(-i H (-t)) is the adjoint of exp(-i H t) by construction.
ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t);

/// Time-ordered exponential T exp(-i \int_{t_start}^{t_end} H(t) dt) using
/// `substeps` piecewise-constant exponentials sampled at the substep
/// midpoints. Later factors multiply from the left; the product is projected
/// back onto the unitaries to drop accumulated rounding.
ComplexMatrix ordered_propagator(const HamiltonianSampler& sampler, double t_start, double t_end,
                                 int substeps);

}  // namespace sfq
