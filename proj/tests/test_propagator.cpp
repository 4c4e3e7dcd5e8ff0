#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sfq/error.hpp"
#include "sfq/model.hpp"
#include "sfq/propagator.hpp"

namespace sfq {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOmega = 2.0 * kPi * 5.0e9;
constexpr double kDelta = 2.0 * kPi * -0.2e9;

TEST(ExpmHermitian, ZeroGeneratorIsIdentity) {
  const ComplexMatrix u = expm_hermitian(ComplexMatrix::Zero(3, 3), 7e-12);
  EXPECT_LT(max_abs(u - ComplexMatrix::Identity(3, 3)), 1e-15);
}

TEST(ExpmHermitian, DriftOverOnePixelIsClosedFormDiagonal) {
  const ComplexMatrix u = expm_hermitian(oracle::literal_drift3(kOmega, kDelta), 10e-12);
  ComplexMatrix expected = ComplexMatrix::Zero(3, 3);
  expected(0, 0) = 1.0;
  expected(1, 1) = std::polar(1.0, -0.1 * kPi);
  expected(2, 2) = std::polar(1.0, -0.196 * kPi);
  EXPECT_LT(max_abs(u - expected), 1e-12);
}

TEST(ExpmHermitian, MatchesTaylorSeriesOnRandomHermitian) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h = oracle::random_hermitian(3, 3e10, rng);
    const ComplexMatrix u = expm_hermitian(h, 1e-12);
    EXPECT_LT(max_abs(u - oracle::taylor_expm(h, 1e-12, 20)), 1e-10) << "trial " << trial;
  }
}

TEST(ExpmHermitian, UnitaryGroupAndInverseProperties) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dur(-50e-12, 50e-12);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + trial % 7;
    const ComplexMatrix h = oracle::random_hermitian(dim, 6e10, rng);
    const double a = dur(rng);
    const double b = dur(rng);
    const ComplexMatrix ua = expm_hermitian(h, a);
    EXPECT_LT(unitarity_defect(ua), 1e-12);
    EXPECT_LT(max_abs(ua * expm_hermitian(h, b) - expm_hermitian(h, a + b)), 1e-10);
    EXPECT_LT(max_abs(expm_hermitian(h, -a) - ua.adjoint()), 1e-12);
  }
}

TEST(ExpmHermitian, RejectsNonHermitianAndBadDimensions) {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 1) = 1.0;
  try {
    expm_hermitian(h, 1.0);
    FAIL() << "expected NonHermitianInput";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonHermitianInput);
  }
  try {
    expm_hermitian(ComplexMatrix::Zero(1, 1), 1.0);
    FAIL() << "expected DimensionMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(OrderedPropagator, ConstantGeneratorSingleStepIsPlainExponential) {
  std::mt19937_64 rng(3);
  const ComplexMatrix h = oracle::random_hermitian(3, 3e10, rng);
  const ComplexMatrix u = ordered_propagator([&](double) { return h; }, -5e-12, 5e-12, 1);
  EXPECT_LT(max_abs(u - expm_hermitian(h, 10e-12)), 1e-14);
}

TEST(OrderedPropagator, DriftOnlyEqualsFreeEvolution) {
  const ComplexMatrix h0 = oracle::literal_drift3(kOmega, kDelta);
  for (int steps : {1, 7, 200}) {
    const ComplexMatrix u = ordered_propagator([&](double) { return h0; }, -5e-12, 5e-12, steps);
    EXPECT_LT(max_abs(u - expm_hermitian(h0, 10e-12)), 1e-12) << steps;
  }
}

TEST(OrderedPropagator, LaterFactorsMultiplyFromTheLeft) {
  // Two constant halves with non-commuting generators.
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 1) = 1e11;
  a(1, 0) = 1e11;
  ComplexMatrix b = ComplexMatrix::Zero(2, 2);
  b(0, 0) = 1e11;
  b(1, 1) = -1e11;
  auto sampler = [&](double t) { return t < 0.0 ? a : b; };
  const ComplexMatrix u = ordered_propagator(sampler, -1e-11, 1e-11, 2);
  EXPECT_LT(max_abs(u - expm_hermitian(b, 1e-11) * expm_hermitian(a, 1e-11)), 1e-14);
}

TEST(OrderedPropagator, RejectsInconsistentDimensionsAndBadWindows) {
  auto sampler = [](double t) -> ComplexMatrix {
    return t < 0.0 ? ComplexMatrix::Zero(2, 2) : ComplexMatrix::Zero(3, 3);
  };
  try {
    ordered_propagator(sampler, -1.0, 1.0, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
  auto zero = [](double) -> ComplexMatrix { return ComplexMatrix::Zero(2, 2); };
  EXPECT_THROW(ordered_propagator(zero, 1.0, 1.0, 4), Error);
  EXPECT_THROW(ordered_propagator(zero, 0.0, 1.0, 0), Error);
}

// Pulse-driven generator with a chirp-free Gaussian, built from the literal
// three-level matrices.
ComplexMatrix pulsed(double t) {
  static const ComplexMatrix h0 = oracle::literal_drift3(kOmega, kDelta);
  static const ComplexMatrix h1 = oracle::literal_control3();
  const double tau = 5e-12 / 3.0;
  const double amp = (kPi / 100.0) / (std::sqrt(2.0 * kPi) * tau);
  return h0 + amp * std::exp(-t * t / (2.0 * tau * tau)) * h1;
}

TEST(NearestUnitary, RestoresUnitarityWithoutMovingUnitaries) {
  std::mt19937_64 rng(11);
  const ComplexMatrix u = expm_hermitian(oracle::random_hermitian(4, 1.0, rng), 0.8);
  EXPECT_LT(max_abs(nearest_unitary(u) - u), 1e-14);
  const ComplexMatrix noisy = u * (1.0 + 1e-9);
  EXPECT_GT(unitarity_defect(noisy), 1e-9);
  EXPECT_LT(unitarity_defect(nearest_unitary(noisy)), 1e-14);
  EXPECT_LT(max_abs(nearest_unitary(noisy) - u), 1e-14);
}

TEST(OrderedPropagator, StaysUnitaryOverManySubsteps) {
  EXPECT_LT(unitarity_defect(ordered_propagator(pulsed, -5e-12, 5e-12, 8000)), 1e-14);
}

TEST(OrderedPropagator, SelfConvergesUnderSubstepDoubling) {
  const ComplexMatrix coarse = ordered_propagator(pulsed, -5e-12, 5e-12, kDefaultSubsteps);
  const ComplexMatrix fine = ordered_propagator(pulsed, -5e-12, 5e-12, 2 * kDefaultSubsteps);
  EXPECT_LT(unitarity_defect(coarse), 1e-12);
  EXPECT_LT(max_abs(coarse - fine), 1e-10);
  // 200 midpoint substeps are not enough for that tolerance.
  EXPECT_GT(max_abs(ordered_propagator(pulsed, -5e-12, 5e-12, 200) -
                    ordered_propagator(pulsed, -5e-12, 5e-12, 400)),
            1e-10);
}

TEST(OrderedPropagator, MidpointRuleIsSecondOrder) {
  const ComplexMatrix reference = ordered_propagator(pulsed, -5e-12, 5e-12, 3200);
  for (int n : {25, 50, 100}) {
    // Deviation from a 4x-substep reference; doubling n must cut it by >= 3.
    const double coarse = max_abs(ordered_propagator(pulsed, -5e-12, 5e-12, n) -
                                  ordered_propagator(pulsed, -5e-12, 5e-12, 4 * n));
    const double fine = max_abs(ordered_propagator(pulsed, -5e-12, 5e-12, 2 * n) -
                                ordered_propagator(pulsed, -5e-12, 5e-12, 8 * n));
    EXPECT_GT(coarse / fine, 3.0) << "n = " << n;
  }
  EXPECT_LT(max_abs(ordered_propagator(pulsed, -5e-12, 5e-12, 1600) - reference), 1e-9);
}

}  // namespace
}  // namespace sfq
