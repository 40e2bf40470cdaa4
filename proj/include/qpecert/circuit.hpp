#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qpecert/common.hpp"
#include "qpecert/linalg.hpp"
#include "qpecert/phase.hpp"

namespace qpecert {

// Uniform superposition (1/2^{t/2}) sum_k |k>_t: the |0>_t input followed by
// a Hadamard on every first-register line.
inline StateVector plus_register(int t) {
  require_register_width(t, "plus_register");
  const std::uint64_t dim = pow2(t);
  const double amp = std::pow(2.0, -0.5 * t);
  StateVector v(dim);
  for (std::uint64_t k = 0; k < dim; ++k) v[k] = amp;
  return v;
}

// Inverse quantum Fourier transform on n qubits:
//   entry (l, k) = 2^{-n/2} e^{-2 pi i k l / 2^n}.
inline UnitaryMatrix inv_qft(int n) {
  require_register_width(n, "inv_qft");
  const std::uint64_t dim = pow2(n);
  const double amp = std::pow(2.0, -0.5 * n);
  Matrix m(dim);
  for (std::uint64_t l = 0; l < dim; ++l)
    for (std::uint64_t k = 0; k < dim; ++k) {
      const double phase01 = std::fmod(static_cast<double>(k * l), static_cast<double>(dim));
      m.at(l, k) = amp * unit_phase(-kTau * phase01 / static_cast<double>(dim));
    }
  return UnitaryMatrix::unchecked(std::move(m));
}

// U^(2^j) by j repeated squarings. Stays independent of U's spectral
// structure, which is what the suite is verifying.
inline Matrix matrix_power_pow2(const Matrix& u, int j) {
  if (j < 0) throw std::domain_error("matrix_power_pow2: negative exponent");
  Matrix acc = u;
  for (int i = 0; i < j; ++i) acc = multiply(acc, acc);
  return acc;
}

// |0><0| (x) I + |1><1| (x) U^(2^j), one control qubit above the target register.
inline UnitaryMatrix controlled_power(const UnitaryMatrix& u, int j) {
  const std::uint64_t s_dim = u.dim();
  const Matrix u_pow = matrix_power_pow2(u.matrix(), j);
  Matrix m(2 * s_dim);
  for (std::uint64_t x = 0; x < s_dim; ++x) m.at(x, x) = 1.0;
  for (std::uint64_t r = 0; r < s_dim; ++r)
    for (std::uint64_t c = 0; c < s_dim; ++c) m.at(s_dim + r, s_dim + c) = u_pow.at(r, c);
  return UnitaryMatrix::unchecked(std::move(m));
}

namespace detail {

// Apply the controlled-U^(2^j) stage in place on a full register state of
// t + s qubits. The control sits on the first-register line whose big-endian
// bit is j; identity padding on all other lines is implicit (the operator is
// block diagonal over first-register values).
inline void apply_controlled_stage(StateVector& state, const Matrix& u_pow, int j, int t, int s) {
  const std::uint64_t first_dim = pow2(t);
  const std::uint64_t second_dim = pow2(s);
  const std::uint64_t bit = pow2(j);
  std::vector<Complex> block(second_dim);
  for (std::uint64_t f = 0; f < first_dim; ++f) {
    if (!(f & bit)) continue;  // control inactive
    const std::uint64_t base = f * second_dim;
    for (std::uint64_t r = 0; r < second_dim; ++r) {
      Complex acc{0.0, 0.0};
      for (std::uint64_t c = 0; c < second_dim; ++c) acc += u_pow.at(r, c) * state[base + c];
      block[r] = acc;
    }
    for (std::uint64_t r = 0; r < second_dim; ++r) state[base + r] = block[r];
  }
}

// Apply a 2^t x 2^t matrix to the first register of a t + s qubit state.
inline StateVector apply_first_register(const Matrix& m, const StateVector& state, int t, int s) {
  const std::uint64_t first_dim = pow2(t);
  const std::uint64_t second_dim = pow2(s);
  if (m.dim() != first_dim || state.dim() != first_dim * second_dim)
    throw std::domain_error("apply_first_register: dimension mismatch");
  StateVector out(state.dim());
  for (std::uint64_t f = 0; f < first_dim; ++f)
    for (std::uint64_t g = 0; g < first_dim; ++g) {
      const Complex coeff = m.at(f, g);
      if (coeff == Complex{0.0, 0.0}) continue;
      const std::uint64_t src = g * second_dim;
      const std::uint64_t dst = f * second_dim;
      for (std::uint64_t x = 0; x < second_dim; ++x) out[dst + x] += coeff * state[src + x];
    }
  return out;
}

// The t power matrices U^(2^0) .. U^(2^{t-1}), index j.
inline std::vector<Matrix> stage_powers(const UnitaryMatrix& u, int t) {
  std::vector<Matrix> powers;
  powers.reserve(t);
  powers.push_back(u.matrix());
  for (int j = 1; j < t; ++j) powers.push_back(multiply(powers.back(), powers.back()));
  return powers;
}

// Run the controlled-power stages of the circuit on a full-register state,
// top line (j = t-1) first, as drawn.
inline void run_qpe1_stages(StateVector& state, const std::vector<Matrix>& powers, int t, int s) {
  for (int j = t - 1; j >= 0; --j) apply_controlled_stage(state, powers[j], j, t, s);
}

}  // namespace detail

// The circuit segment between slices 1 and 2: controlled U^(2^{t-1}) on the
// top first-register line down to controlled U^(2^0) on the bottom one,
// assembled column by column.
inline UnitaryMatrix build_qpe1(const UnitaryMatrix& u, int t) {
  require_register_width(t, "build_qpe1");
  const std::uint64_t s_dim = u.dim();
  int s = 0;
  while (pow2(s) < s_dim) ++s;
  if (pow2(s) != s_dim) throw std::domain_error("build_qpe1: target dimension not a power of 2");
  require_register_width(t + s, "build_qpe1");

  const std::vector<Matrix> powers = detail::stage_powers(u, t);
  const std::uint64_t dim = pow2(t + s);
  Matrix out(dim);
  for (std::uint64_t col = 0; col < dim; ++col) {
    StateVector basis(dim);
    basis[col] = 1.0;
    detail::run_qpe1_stages(basis, powers, t, s);
    for (std::uint64_t row = 0; row < dim; ++row) out.at(row, col) = basis[row];
  }
  return UnitaryMatrix::unchecked(std::move(out));
}

// The full gate between slices 1 and 3: (FT^dagger_t (x) I_{2^s}) QPE1(U, t).
inline UnitaryMatrix build_qpe(const UnitaryMatrix& u, int t) {
  const UnitaryMatrix qpe1 = build_qpe1(u, t);
  const std::uint64_t s_dim = u.dim();
  int s = 0;
  while (pow2(s) < s_dim) ++s;
  const UnitaryMatrix ft = inv_qft(t);
  const std::uint64_t dim = qpe1.dim();
  Matrix out(dim);
  for (std::uint64_t col = 0; col < dim; ++col) {
    StateVector column(dim);
    for (std::uint64_t row = 0; row < dim; ++row) column[row] = qpe1.at(row, col);
    column = detail::apply_first_register(ft.matrix(), column, t, s);
    for (std::uint64_t row = 0; row < dim; ++row) out.at(row, col) = column[row];
  }
  return UnitaryMatrix::unchecked(std::move(out));
}

// The problem tuple (t, s, U, |u>, phi). Construction verifies the
// eigenpair and normalization assumptions numerically.
struct QpeInstance {
  int t{0};
  int s{0};
  UnitaryMatrix unitary;
  StateVector eigenvector;
  Phase phase;

  static QpeInstance make(int t, int s, UnitaryMatrix u, StateVector eigvec, Phase phi) {
    require_register_width(t, "QpeInstance");
    require_register_width(s, "QpeInstance");
    require_register_width(t + s, "QpeInstance");
    if (u.dim() != pow2(s)) throw std::domain_error("QpeInstance: unitary/second-register mismatch");
    if (eigvec.dim() != u.dim()) throw std::domain_error("QpeInstance: eigenvector dimension");
    if (!eigvec.is_normalized(1e-10)) throw std::domain_error("QpeInstance: |u> not normalized");
    const StateVector mapped = apply(u, eigvec);
    const Complex eig = unit_phase(kTau * phi.value());
    double residual_sqr = 0.0;
    for (std::uint64_t i = 0; i < eigvec.dim(); ++i)
      residual_sqr += std::norm(mapped[i] - eig * eigvec[i]);
    if (std::sqrt(residual_sqr) >= 1e-9)
      throw std::domain_error("QpeInstance: (U, |u>, phi) is not an eigenpair");
    return QpeInstance{t, s, std::move(u), std::move(eigvec), phi};
  }
};

// Exact Born-rule outcome probabilities over the t-bit sample space.
struct MeasurementDistribution {
  int t{0};
  std::vector<double> probs;

  static MeasurementDistribution make(int t, std::vector<double> probs) {
    if (probs.size() != pow2(t)) throw std::domain_error("MeasurementDistribution: size != 2^t");
    double sum = 0.0;
    for (double p : probs) {
      if (!(p >= -1e-12 && p <= 1.0 + 1e-9))
        throw std::domain_error("MeasurementDistribution: probability outside [0,1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) >= 1e-9)
      throw std::domain_error("MeasurementDistribution: probabilities sum to " + std::to_string(sum));
    return MeasurementDistribution{t, std::move(probs)};
  }

  double total() const {
    double sum = 0.0;
    for (double p : probs) sum += p;
    return sum;
  }
};

// First-register state at slice 2, obtained by running the controlled-power
// stages on plus_register(t) (x) |u> and factoring out |u>. The second
// register must still hold |u> exactly; the residual threshold turns that
// claim into a checkable condition.
inline StateVector stage2_state(const QpeInstance& inst) {
  const std::uint64_t first_dim = pow2(inst.t);
  const std::uint64_t second_dim = pow2(inst.s);

  StateVector state = tensor_vec(plus_register(inst.t), inst.eigenvector);
  const std::vector<Matrix> powers = detail::stage_powers(inst.unitary, inst.t);
  detail::run_qpe1_stages(state, powers, inst.t, inst.s);

  StateVector first(first_dim);
  for (std::uint64_t f = 0; f < first_dim; ++f) {
    Complex acc{0.0, 0.0};
    for (std::uint64_t x = 0; x < second_dim; ++x)
      acc += std::conj(inst.eigenvector[x]) * state[f * second_dim + x];
    first[f] = acc;
  }

  // || (I - I_t (x) |u><u|) state ||, formed explicitly so the residual is
  // resolvable well below sqrt(machine epsilon).
  double residual_sqr = 0.0;
  for (std::uint64_t f = 0; f < first_dim; ++f)
    for (std::uint64_t x = 0; x < second_dim; ++x)
      residual_sqr += std::norm(state[f * second_dim + x] - first[f] * inst.eigenvector[x]);
  if (std::sqrt(residual_sqr) > 1e-8)
    throw entanglement_error("stage2_state: second register left entangled, residual " +
                             std::to_string(std::sqrt(residual_sqr)));
  return first;
}

// probs[m] = |<m|Psi>|^2 with Psi = FT^dagger_t applied to the slice-2 state.
inline MeasurementDistribution output_distribution(const QpeInstance& inst) {
  const StateVector psi_t = stage2_state(inst);
  const StateVector big_psi = apply(inv_qft(inst.t), psi_t);
  std::vector<double> probs(big_psi.dim());
  for (std::uint64_t m = 0; m < big_psi.dim(); ++m) probs[m] = std::norm(big_psi[m]);
  return MeasurementDistribution::make(inst.t, std::move(probs));
}

}  // namespace qpecert
