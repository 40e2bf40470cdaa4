#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qpecert/circuit.hpp"
#include "qpecert/common.hpp"
#include "qpecert/linalg.hpp"
#include "qpecert/phase.hpp"

namespace qpecert {

// Single-qubit factor (|0> + e^{2 pi i 2^j phi} |1>) / sqrt(2).
inline StateVector phase_qubit(double phi, int j) {
  StateVector v(2);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const double turns = std::fmod(std::ldexp(phi, j), 1.0);
  v[0] = inv_sqrt2;
  v[1] = inv_sqrt2 * unit_phase(kTau * turns);
  return v;
}

// psi_t as the tensor product of single-qubit phase states, highest power
// of two on the first (most significant) line.
inline StateVector psi_t_tensor(double phi, int t) {
  require_register_width(t, "psi_t_tensor");
  StateVector acc = phase_qubit(phi, t - 1);
  for (int j = t - 2; j >= 0; --j) acc = tensor_vec(acc, phase_qubit(phi, j));
  return acc;
}

// psi_t via the summation formula (1/2^{t/2}) sum_k e^{2 pi i phi k} |k>_t.
inline StateVector psi_t_sum(double phi, int t) {
  require_register_width(t, "psi_t_sum");
  const std::uint64_t dim = pow2(t);
  const double amp = std::pow(2.0, -0.5 * t);
  StateVector v(dim);
  for (std::uint64_t k = 0; k < dim; ++k) {
    const double turns = std::fmod(phi * static_cast<double>(k), 1.0);
    v[k] = amp * unit_phase(kTau * turns);
  }
  return v;
}

// Psi = FT^dagger_t psi_t, the first-register state just before measurement.
inline StateVector big_psi(double phi, int t) {
  return apply(inv_qft(t), psi_t_sum(phi, t));
}

// alpha_m = (1/2^t) sum_k e^{-2 pi i k m / 2^t} e^{2 pi i phi k},
// for m in the outcome domain.
inline Complex alpha_m_eval(double phi, int t, std::int64_t m) {
  require_register_width(t, "alpha_m_eval");
  const std::int64_t dim = static_cast<std::int64_t>(pow2(t));
  if (m < 0 || m >= dim) throw std::domain_error("alpha_m_eval: outcome out of range");
  Complex acc{0.0, 0.0};
  for (std::int64_t k = 0; k < dim; ++k) {
    const double dft_turns = std::fmod(static_cast<double>(k * m), static_cast<double>(dim)) /
                             static_cast<double>(dim);
    const double phase_turns = std::fmod(phi * static_cast<double>(k), 1.0);
    acc += unit_phase(-kTau * dft_turns) * unit_phase(kTau * phase_turns);
  }
  return acc / static_cast<double>(dim);
}

// alpha_{m mod 2^t} as the geometric sum (1/2^t) sum_k r^k with
// r = e^{2 pi i (phi - m/2^t)}; m may be any integer.
inline Complex alpha_geom(double phi, int t, std::int64_t m) {
  require_register_width(t, "alpha_geom");
  const std::int64_t dim = static_cast<std::int64_t>(pow2(t));
  const Complex ratio = unit_phase(kTau * (phi - static_cast<double>(m) / static_cast<double>(dim)));
  Complex acc{0.0, 0.0};
  Complex power{1.0, 0.0};
  for (std::int64_t k = 0; k < dim; ++k) {
    acc += power;
    power *= ratio;
  }
  return acc / static_cast<double>(dim);
}

// Closed form for alpha_{b_f (+) ell}:
//   (1/2^t) (1 - e^{2 pi i (2^t d - ell)}) / (1 - e^{2 pi i (d - ell/2^t)})
// with d = delta_{b_f}. When d = 0 the numerator exponent is an integer and
// the amplitude is exactly 0; that case is decided on the exact rational
// phase, not by floating comparison.
inline Complex alpha_closed(const Phase& phi, int t, std::int64_t ell) {
  require_register_width(t, "alpha_closed");
  const std::int64_t half = static_cast<std::int64_t>(pow2(t - 1));
  if (ell == 0) throw std::domain_error("alpha_closed: ell must be nonzero");
  if (ell < -half + 1 || ell > half) throw std::domain_error("alpha_closed: ell out of range");

  const PhaseGeometry geom = PhaseGeometry::from(phi, t);
  if (geom.delta_floor_is_zero) return Complex{0.0, 0.0};

  const double dim = std::ldexp(1.0, t);
  const Complex numerator =
      1.0 - unit_phase(kTau * (dim * geom.delta_floor - static_cast<double>(ell)));
  const Complex denominator =
      1.0 - unit_phase(kTau * (geom.delta_floor - static_cast<double>(ell) / dim));
  if (std::abs(denominator) < 1e-14)
    throw std::domain_error("alpha_closed: denominator vanishes");
  return numerator / denominator / dim;
}

// Upper bound 1 / (4 (ell - 2^t delta_{b_f})^2) on |alpha_{b_f (+) ell}|^2.
inline double alpha_sqrd_bound(int t, double delta_bf, std::int64_t ell) {
  require_register_width(t, "alpha_sqrd_bound");
  if (ell == 0) throw std::domain_error("alpha_sqrd_bound: ell must be nonzero");
  const double gap = static_cast<double>(ell) - std::ldexp(delta_bf, t);
  if (gap == 0.0) throw std::domain_error("alpha_sqrd_bound: ell equals 2^t delta");
  return 1.0 / (4.0 * gap * gap);
}

inline void require_e_domain(std::int64_t e, int t, const char* where) {
  const std::int64_t upper = static_cast<std::int64_t>(pow2(t - 1)) - 2;
  if (e < 1 || e > upper)
    throw std::domain_error(std::string(where) + ": e outside {1,...,2^(t-1)-2}");
}

enum class FailProbMode { definition, sum };

// Probability that the measured m lies more than e units (mod 2^t) from b_f.
// definition mode sums the distribution directly; sum mode evaluates
//   sum_{ell=-2^{t-1}+1}^{-(e+1)} |alpha_{b_f (+) ell}|^2
//     + sum_{ell=e+1}^{2^{t-1}} |alpha_{b_f (+) ell}|^2
// from the geometric-sum amplitudes alone.
inline double fail_prob(const MeasurementDistribution& dist, const Phase& phi, std::int64_t e,
                        FailProbMode mode) {
  const int t = dist.t;
  require_e_domain(e, t, "fail_prob");
  const std::int64_t dim = static_cast<std::int64_t>(pow2(t));
  const std::int64_t half = dim / 2;
  const PhaseGeometry geom = PhaseGeometry::from(phi, t);

  if (mode == FailProbMode::definition) {
    double total = 0.0;
    for (std::int64_t m = 0; m < dim; ++m)
      if (mod_abs_int(m - geom.best_floor, dim) > e) total += dist.probs[m];
    return total;
  }

  double total = 0.0;
  for (std::int64_t ell = -half + 1; ell <= -(e + 1); ++ell)
    total += std::norm(alpha_geom(phi.value(), t, geom.best_floor + ell));
  for (std::int64_t ell = e + 1; ell <= half; ++ell)
    total += std::norm(alpha_geom(phi.value(), t, geom.best_floor + ell));
  return total;
}

// Probability that the measured m lies within e units (mod 2^t) of b_f.
inline double success_prob(const MeasurementDistribution& dist, const Phase& phi, std::int64_t e) {
  const int t = dist.t;
  require_e_domain(e, t, "success_prob");
  const std::int64_t dim = static_cast<std::int64_t>(pow2(t));
  const PhaseGeometry geom = PhaseGeometry::from(phi, t);
  double total = 0.0;
  for (std::int64_t m = 0; m < dim; ++m)
    if (mod_abs_int(m - geom.best_floor, dim) <= e) total += dist.probs[m];
  return total;
}

// 1/(2e) + 1/(4e^2), valid from e >= 1.
inline double tight_failure_bound(std::int64_t e) {
  if (e < 1) throw std::domain_error("tight_failure_bound: e must be positive");
  const double ed = static_cast<double>(e);
  return 1.0 / (2.0 * ed) + 1.0 / (4.0 * ed * ed);
}

// The textbook bound 1/(2(e-1)), valid only from e >= 2.
inline double original_failure_bound(std::int64_t e) {
  if (e < 2) throw std::domain_error("original_failure_bound: holds only for e >= 2");
  return 1.0 / (2.0 * static_cast<double>(e - 1));
}

struct FailureBounds {
  double tight{0.0};
  std::optional<double> original;  // absent for e = 1
};

inline FailureBounds failure_bounds(std::int64_t e) {
  FailureBounds b;
  b.tight = tight_failure_bound(e);
  if (e >= 2) b.original = original_failure_bound(e);
  return b;
}

// Intermediate bound (1/4) sum 1/(ell - 2^t delta)^2 over the two fail ranges.
inline double failure_bound_lemma_form(int t, double delta_bf, std::int64_t e) {
  require_e_domain(e, t, "failure_bound_lemma_form");
  const std::int64_t half = static_cast<std::int64_t>(pow2(t - 1));
  const double scaled = std::ldexp(delta_bf, t);
  double total = 0.0;
  for (std::int64_t ell = -half + 1; ell <= -(e + 1); ++ell) {
    const double gap = static_cast<double>(ell) - scaled;
    total += 1.0 / (gap * gap);
  }
  for (std::int64_t ell = e + 1; ell <= half; ++ell) {
    const double gap = static_cast<double>(ell) - scaled;
    total += 1.0 / (gap * gap);
  }
  return 0.25 * total;
}

struct PrecisionSpec {
  int n{1};           // requested bits of precision
  double epsilon{1.0};  // acceptable failure probability, in (0, 1]

  PrecisionSpec(int n_, double eps) : n(n_), epsilon(eps) {
    if (n < 1) throw std::domain_error("PrecisionSpec: n must be positive");
    if (!(epsilon > 0.0 && epsilon <= 1.0))
      throw std::domain_error("PrecisionSpec: epsilon outside (0,1]");
  }
};

// Minimal t = n + ceil(log2(2 + 1/(2 epsilon))). The ceiling is taken on the
// integers (smallest c with 2^c >= x) so exact powers of two stay exact.
inline int t_required(const PrecisionSpec& spec) {
  const double x = 2.0 + 1.0 / (2.0 * spec.epsilon);
  int c = 0;
  while (std::ldexp(1.0, c) < x) ++c;
  return spec.n + c;
}

// e = 2^(t-n) - 1, the error tolerance induced by an n-bit precision target.
inline std::int64_t e_value(int t, int n) {
  if (n < 1 || t <= n) throw std::domain_error("e_value: requires t > n >= 1");
  return static_cast<std::int64_t>(pow2(t - n)) - 1;
}

struct TrigBoundChecks {
  bool chord_lower{false};  // (2/pi) theta <= |1 - e^{i theta}| on [0, pi]
  bool chord_upper{false};  // |1 - e^{i theta}| <= 2 on [0, pi]
  bool sine_lower{false};   // sin(theta) >= (2/pi) theta on [0, pi/2]
  bool sine_strict{false};  // sin(theta) < theta for theta > 0

  bool all() const { return chord_lower && chord_upper && sine_lower && sine_strict; }
};

// Evaluate the four chord/sine bounds at each sample. Samples must lie in
// [0, pi]; each bound is checked over the part of the sample set inside its
// own domain. The non-strict bounds get zero slack. The strict bound is
// required with margin 1e-15 once theta is clear of zero; below the cutoff
// theta^3/6 drops under rounding and only sin(theta) <= theta is demanded.
inline TrigBoundChecks trig_bound_checks(std::span<const double> thetas) {
  constexpr double kStrictCutoff = 1e-4;
  TrigBoundChecks out{true, true, true, true};
  for (double theta : thetas) {
    if (!(theta >= 0.0 && theta <= kPi))
      throw std::domain_error("trig_bound_checks: sample outside [0, pi]");
    const double chord = std::abs(1.0 - unit_phase(theta));
    const double linear = 2.0 * theta / kPi;
    if (chord < linear) out.chord_lower = false;
    if (chord > 2.0) out.chord_upper = false;
    if (theta <= kPi / 2.0 && std::sin(theta) < linear) out.sine_lower = false;
    if (theta >= kStrictCutoff && !(std::sin(theta) < theta - 1e-15)) out.sine_strict = false;
    if (theta > 0.0 && theta < kStrictCutoff && std::sin(theta) > theta) out.sine_strict = false;
  }
  return out;
}

}  // namespace qpecert
