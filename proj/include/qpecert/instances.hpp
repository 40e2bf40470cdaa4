#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qpecert/circuit.hpp"
#include "qpecert/common.hpp"
#include "qpecert/linalg.hpp"
#include "qpecert/phase.hpp"

namespace qpecert {

// splitmix64; self-contained so that equal seeds give bit-identical draws
// regardless of standard library.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // standard normal via Box-Muller
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_unit();
    while (u1 <= 0.0) u1 = next_unit();
    const double u2 = next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(kTau * u2);
    have_spare_ = true;
    return radius * std::cos(kTau * u2);
  }

  Complex next_complex_gaussian() {
    const double re = next_gaussian();
    const double im = next_gaussian();
    return Complex{re, im};
  }

 private:
  std::uint64_t state_;
  bool have_spare_{false};
  double spare_{0.0};
};

// Stable seed derivation for per-instance generators.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  SeededRng rng(seed ^ (salt * 0x9e3779b97f4a7c15ull + 0x243f6a8885a308d3ull));
  return rng.next_u64();
}

// Simplest instance satisfying the eigenpair assumptions exactly:
// U = diag(e^{2 pi i phi}, e^{2 pi i j/2^s} for j = 1..2^s-1), u = |0>_s.
inline QpeInstance diagonal_instance(int t, int s, const Phase& phi) {
  require_register_width(s, "diagonal_instance");
  const std::uint64_t dim = pow2(s);
  Matrix m(dim);
  m.at(0, 0) = unit_phase(kTau * phi.value());
  for (std::uint64_t j = 1; j < dim; ++j)
    m.at(j, j) = unit_phase(kTau * static_cast<double>(j) / static_cast<double>(dim));
  StateVector u(dim);
  u[0] = 1.0;
  return QpeInstance::make(t, s, UnitaryMatrix::unchecked(std::move(m)), std::move(u), phi);
}

namespace detail {

// Modified Gram-Schmidt on the columns of g. Returns false on rank
// deficiency (residual collapses before normalization).
inline bool orthonormalize_columns(Matrix& g) {
  const std::uint64_t n = g.dim();
  for (std::uint64_t c = 0; c < n; ++c) {
    for (std::uint64_t prev = 0; prev < c; ++prev) {
      Complex proj{0.0, 0.0};
      for (std::uint64_t r = 0; r < n; ++r) proj += std::conj(g.at(r, prev)) * g.at(r, c);
      for (std::uint64_t r = 0; r < n; ++r) g.at(r, c) -= proj * g.at(r, prev);
    }
    double norm_sqr = 0.0;
    for (std::uint64_t r = 0; r < n; ++r) norm_sqr += std::norm(g.at(r, c));
    const double norm = std::sqrt(norm_sqr);
    if (norm < 1e-8) return false;
    for (std::uint64_t r = 0; r < n; ++r) g.at(r, c) /= norm;
  }
  return true;
}

}  // namespace detail

// General instance: draw a seeded complex Gaussian matrix, orthonormalize its
// columns into V, and set U = V diag(e^{2 pi i phi}, random phases) V^dagger
// with u = the first column of V.
inline QpeInstance random_instance(int t, int s, const Phase& phi, std::uint64_t seed) {
  require_register_width(s, "random_instance");
  const std::uint64_t dim = pow2(s);
  SeededRng rng(seed);

  Matrix v;
  bool ok = false;
  for (int attempt = 0; attempt < 3 && !ok; ++attempt) {
    Matrix g(dim);
    for (std::uint64_t r = 0; r < dim; ++r)
      for (std::uint64_t c = 0; c < dim; ++c) g.at(r, c) = rng.next_complex_gaussian();
    if (detail::orthonormalize_columns(g)) {
      v = std::move(g);
      ok = true;
    }
  }
  if (!ok) throw std::runtime_error("random_instance: degenerate draw after 3 attempts");

  std::vector<Complex> eigenvalues(dim);
  eigenvalues[0] = unit_phase(kTau * phi.value());
  for (std::uint64_t j = 1; j < dim; ++j) eigenvalues[j] = unit_phase(kTau * rng.next_unit());

  // U = V D V^dagger
  Matrix u_mat(dim);
  for (std::uint64_t r = 0; r < dim; ++r)
    for (std::uint64_t c = 0; c < dim; ++c) {
      Complex acc{0.0, 0.0};
      for (std::uint64_t k = 0; k < dim; ++k)
        acc += v.at(r, k) * eigenvalues[k] * std::conj(v.at(c, k));
      u_mat.at(r, c) = acc;
    }

  StateVector u(dim);
  for (std::uint64_t r = 0; r < dim; ++r) u[r] = v.at(r, 0);
  return QpeInstance::make(t, s, UnitaryMatrix::unchecked(std::move(u_mat)), std::move(u), phi);
}

enum class PhaseKind { dyadic, nondyadic, mixed };

// Fixed non-dyadic rationals in [0,1). None has a power-of-two denominator,
// so every entry stays non-dyadic at every register width.
inline const std::vector<Phase>& nondyadic_phases() {
  static const std::vector<Phase> grid = [] {
    std::vector<Phase> phases;
    const std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>> table = {
        {3, {1, 2}},
        {5, {1, 2, 3, 4}},
        {6, {1, 5}},
        {7, {1, 2, 3, 4, 5, 6}},
        {9, {1, 2, 4, 5, 7, 8}},
        {10, {1, 3, 7, 9}},
        {11, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}},
        {13, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}},
    };
    for (const auto& [den, nums] : table)
      for (std::int64_t num : nums) phases.push_back(Phase::rational(num, den));
    return phases;
  }();
  return grid;
}

inline std::vector<Phase> phase_grid(int t, PhaseKind kind) {
  require_register_width(t, "phase_grid");
  std::vector<Phase> phases;
  if (kind == PhaseKind::dyadic || kind == PhaseKind::mixed) {
    const std::int64_t dim = static_cast<std::int64_t>(pow2(t));
    for (std::int64_t k = 0; k < dim; ++k) phases.push_back(Phase::dyadic(k, t));
  }
  if (kind == PhaseKind::nondyadic || kind == PhaseKind::mixed) {
    const auto& fixed = nondyadic_phases();
    phases.insert(phases.end(), fixed.begin(), fixed.end());
  }
  return phases;
}

}  // namespace qpecert
