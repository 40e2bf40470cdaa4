#include "qpecert/linalg.hpp"

#include <cmath>
#include <gtest/gtest.h>

#include "qpecert/circuit.hpp"
#include "qpecert/instances.hpp"

namespace qpecert {
namespace {

StateVector random_state(SeededRng& rng, std::uint64_t dim, bool normalize = true) {
  StateVector v(dim);
  for (std::uint64_t i = 0; i < dim; ++i) v[i] = rng.next_complex_gaussian();
  if (normalize) {
    const double norm = v.norm();
    for (auto& a : v) a /= norm;
  }
  return v;
}

UnitaryMatrix random_unitary(SeededRng& rng, int qubits) {
  const std::uint64_t dim = pow2(qubits);
  Matrix g(dim);
  for (std::uint64_t r = 0; r < dim; ++r)
    for (std::uint64_t c = 0; c < dim; ++c) g.at(r, c) = rng.next_complex_gaussian();
  EXPECT_TRUE(detail::orthonormalize_columns(g));
  return UnitaryMatrix::unchecked(std::move(g));
}

TEST(NumberKet, BasisVectors) {
  const StateVector zero = number_ket(0, 1);
  ASSERT_EQ(zero.dim(), 2u);
  EXPECT_EQ(zero[0], Complex(1.0, 0.0));
  EXPECT_EQ(zero[1], Complex(0.0, 0.0));

  // |11010> on 5 qubits is |26>_5
  const StateVector ket26 = number_ket(26, 5);
  ASSERT_EQ(ket26.dim(), 32u);
  for (std::uint64_t i = 0; i < 32; ++i)
    EXPECT_EQ(ket26[i], i == 26 ? Complex(1.0, 0.0) : Complex(0.0, 0.0));

  const StateVector last = number_ket(3, 2);
  EXPECT_EQ(last[3], Complex(1.0, 0.0));
  EXPECT_EQ(last[0], Complex(0.0, 0.0));
}

TEST(NumberKet, RejectsOutOfRange) {
  EXPECT_THROW(number_ket(4, 2), std::domain_error);
  EXPECT_THROW(number_ket(2, 1), std::domain_error);
  EXPECT_THROW(NumberKet(0, 0), std::domain_error);
}

TEST(NumberKet, DistinctValuesAreOrthonormal) {
  const int t = 4;
  for (std::uint64_t j = 0; j < pow2(t); ++j)
    for (std::uint64_t k = 0; k < pow2(t); ++k) {
      const Complex ip = inner_product(number_ket(j, t), number_ket(k, t));
      EXPECT_EQ(ip, j == k ? Complex(1.0, 0.0) : Complex(0.0, 0.0));
    }
}

TEST(TensorVec, KetConcatenation) {
  // |0> (x) |1> = |1>_2
  const StateVector v = tensor_vec(number_ket(0, 1), number_ket(1, 1));
  EXPECT_EQ(max_abs_diff(v, number_ket(1, 2)), 0.0);
}

TEST(TensorVec, PrependedQubitShiftsIndex) {
  // |1> (x) |k>_t = |2^t + k>_{t+1} and |0> (x) |k>_t = |k>_{t+1}
  for (int t = 1; t <= 4; ++t)
    for (std::uint64_t k = 0; k < pow2(t); ++k) {
      const StateVector with_one = tensor_vec(number_ket(1, 1), number_ket(k, t));
      EXPECT_EQ(max_abs_diff(with_one, number_ket(pow2(t) + k, t + 1)), 0.0);
      const StateVector with_zero = tensor_vec(number_ket(0, 1), number_ket(k, t));
      EXPECT_EQ(max_abs_diff(with_zero, number_ket(k, t + 1)), 0.0);
    }
}

TEST(TensorVec, Associativity) {
  SeededRng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector a = random_state(rng, 2, false);
    const StateVector b = random_state(rng, 4, false);
    const StateVector c = random_state(rng, 8, false);
    const StateVector left = tensor_vec(tensor_vec(a, b), c);
    const StateVector right = tensor_vec(a, tensor_vec(b, c));
    EXPECT_LT(max_abs_diff(left, right), 1e-12);
  }
}

TEST(TensorMat, IdentityTimesIdentity) {
  const Matrix i4 = kron(Matrix::identity(2), Matrix::identity(2));
  for (std::uint64_t r = 0; r < 4; ++r)
    for (std::uint64_t c = 0; c < 4; ++c)
      EXPECT_EQ(i4.at(r, c), r == c ? Complex(1.0, 0.0) : Complex(0.0, 0.0));
}

TEST(TensorMat, HadamardOnFirstQubit) {
  const UnitaryMatrix h = inv_qft(1);  // 1-qubit inverse QFT is the Hadamard
  const UnitaryMatrix lifted = tensor_mat(h, UnitaryMatrix::unchecked(Matrix::identity(2)));
  const StateVector out = apply(lifted, number_ket(0, 2));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(out[0] - inv_sqrt2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out[2] - inv_sqrt2), 0.0, 1e-15);
  EXPECT_EQ(out[1], Complex(0.0, 0.0));
  EXPECT_EQ(out[3], Complex(0.0, 0.0));
}

TEST(TensorMat, MixedProductRule) {
  // (A (x) B)(x (x) y) = (A x) (x) (B y)
  SeededRng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const UnitaryMatrix a = random_unitary(rng, 1);
    const UnitaryMatrix b = random_unitary(rng, 2);
    const StateVector x = random_state(rng, 2);
    const StateVector y = random_state(rng, 4);
    const StateVector lhs = apply(tensor_mat(a, b), tensor_vec(x, y));
    const StateVector rhs = tensor_vec(apply(a, x), apply(b, y));
    EXPECT_LT(max_abs_diff(lhs, rhs), 1e-10);
  }
}

TEST(Apply, IdentityAndHadamard) {
  SeededRng rng(7);
  const StateVector v = random_state(rng, 8);
  const StateVector same = apply(Matrix::identity(8), v);
  EXPECT_LT(max_abs_diff(same, v), 1e-15);

  const StateVector plus = apply(inv_qft(1), number_ket(0, 1));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(plus[0] - inv_sqrt2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(plus[1] - inv_sqrt2), 0.0, 1e-15);
}

TEST(Apply, RejectsDimensionMismatch) {
  EXPECT_THROW(apply(Matrix::identity(4), number_ket(0, 1)), std::domain_error);
}

TEST(Apply, UnitaryPreservesNorm) {
  SeededRng rng(31);
  for (int qubits = 1; qubits <= 3; ++qubits)
    for (int trial = 0; trial < 10; ++trial) {
      const UnitaryMatrix u = random_unitary(rng, qubits);
      ASSERT_TRUE(check_unitary(u, 1e-10));
      const StateVector v = random_state(rng, pow2(qubits));
      EXPECT_NEAR(apply(u, v).norm(), v.norm(), 1e-9);
    }
}

TEST(InnerProduct, OrthogonalBasisStates) {
  EXPECT_EQ(inner_product(number_ket(0, 1), number_ket(1, 1)), Complex(0.0, 0.0));
}

TEST(InnerProduct, SelfInnerProductIsNormSquared) {
  SeededRng rng(5);
  const StateVector v = random_state(rng, 16, false);
  const Complex self = inner_product(v, v);
  EXPECT_NEAR(self.real(), v.norm_sqr(), 1e-12);
  EXPECT_NEAR(self.imag(), 0.0, 1e-12);
}

TEST(InnerProduct, ExtractsComponents) {
  SeededRng rng(13);
  const StateVector v = random_state(rng, 8);
  for (std::uint64_t m = 0; m < 8; ++m) {
    const Complex component = inner_product(number_ket(m, 3), v);
    EXPECT_EQ(component, v[m]);
  }
}

TEST(InnerProduct, RejectsDimensionMismatch) {
  EXPECT_THROW(inner_product(number_ket(0, 1), number_ket(0, 2)), std::domain_error);
}

TEST(CheckUnitary, AcceptsIdentityRejectsScaling) {
  EXPECT_TRUE(check_unitary(Matrix::identity(4), 1e-12));
  Matrix diag(2);
  diag.at(0, 0) = 1.0;
  diag.at(1, 1) = 2.0;
  EXPECT_FALSE(check_unitary(diag, 0.5));
}

TEST(CheckUnitary, InverseQftIsUnitary) {
  for (int n = 1; n <= 8; ++n) EXPECT_TRUE(check_unitary(inv_qft(n), 1e-10)) << "n=" << n;
}

TEST(UnitaryMatrix, CheckedRejectsNonUnitary) {
  Matrix diag(2);
  diag.at(0, 0) = 1.0;
  diag.at(1, 1) = 2.0;
  EXPECT_THROW(UnitaryMatrix::checked(std::move(diag)), std::domain_error);
}

TEST(StateVector, RejectsNonFiniteAmplitudes) {
  std::vector<Complex> amps = {Complex(1.0, 0.0), Complex(std::nan(""), 0.0)};
  EXPECT_THROW(StateVector::from_amplitudes(std::move(amps)), std::invalid_argument);
}

}  // namespace
}  // namespace qpecert
