#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qpecert/analytic.hpp"
#include "qpecert/checks.hpp"
#include "qpecert/circuit.hpp"
#include "qpecert/common.hpp"
#include "qpecert/config.hpp"
#include "qpecert/instances.hpp"
#include "qpecert/linalg.hpp"
#include "qpecert/phase.hpp"

// One check node per named theorem of the QPE development, wired with the
// prerequisite edges of the dependency tree. Node names follow the theorem
// names so a report reads as the machine-checked version of the theorem
// tables. Pure typing judgments (set membership of constants) have no
// numeric content and are not registered; docs/checks.md lists the registry.

namespace qpecert {
namespace registry {

inline std::string fmt(int t, const Phase& phi) {
  return "t=" + std::to_string(t) + " phi=" + phi.str();
}
inline std::string fmt(int t, int s, const Phase& phi, const char* kind) {
  return fmt(t, phi) + " s=" + std::to_string(s) + " kind=" + kind;
}

inline std::vector<Phase> grid_for(const CheckContext& ctx, int t, PhaseKind fallback,
                                   std::size_t dyadic_cap = 16) {
  // Honor the configured kind except where a check needs specific content.
  PhaseKind kind = ctx.config.phase_kind;
  if (fallback == PhaseKind::nondyadic || fallback == PhaseKind::dyadic) kind = fallback;
  std::vector<Phase> grid;
  if (kind != PhaseKind::nondyadic) {
    const std::uint64_t dim = pow2(t);
    const std::uint64_t step = std::max<std::uint64_t>(1, dim / dyadic_cap);
    for (std::uint64_t k = 0; k < dim; k += step) grid.push_back(Phase::dyadic(k, t));
  }
  if (kind != PhaseKind::dyadic) {
    const auto& fixed = nondyadic_phases();
    grid.insert(grid.end(), fixed.begin(), fixed.end());
  }
  return grid;
}

// Both instance kinds for one problem, seeds derived per position.
inline std::vector<std::pair<QpeInstance, const char*>> instances_for(const CheckContext& ctx,
                                                                      int t, int s,
                                                                      const Phase& phi,
                                                                      std::uint64_t salt) {
  std::vector<std::pair<QpeInstance, const char*>> out;
  out.emplace_back(diagonal_instance(t, s, phi), "diagonal");
  out.emplace_back(random_instance(t, s, phi, mix_seed(ctx.seed, salt)), "random");
  return out;
}

// ---------------------------------------------------------------------------
// Major theorems: circuit states and the sample space

inline CheckOutcome run_psi_t_output(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  std::uint64_t salt = 0;
  for (int t = 1; t <= ctx.config.t_max; ++t)
    for (int s : ctx.config.s_values)
      for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 8))
        for (const auto& [inst, kind] : instances_for(ctx, t, s, phi, ++salt)) {
          // the problem assumptions themselves, at the configured tolerance
          acc.expect_le(unitarity_defect(inst.unitary.matrix()), ctx.config.unitarity_tol, 0.0,
                        fmt(t, s, phi, kind));
          acc.expect_near(inst.eigenvector.norm(), 1.0, 1e-10, fmt(t, s, phi, kind));
          const StateVector reduced = stage2_state(inst);
          const StateVector analytic = psi_t_tensor(phi.value(), t);
          acc.expect_near(max_abs_diff(reduced, analytic), 0.0, 1e-9, fmt(t, s, phi, kind));
        }
  return acc.finish();
}

inline CheckOutcome run_Psi_output(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  std::uint64_t salt = 0;
  for (int t = 1; t <= ctx.config.t_max; ++t)
    for (int s : ctx.config.s_values)
      for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 8))
        for (const auto& [inst, kind] : instances_for(ctx, t, s, phi, ++salt)) {
          const StateVector reduced = apply(inv_qft(t), stage2_state(inst));
          const StateVector analytic = big_psi(phi.value(), t);
          acc.expect_near(max_abs_diff(reduced, analytic), 0.0, 1e-9, fmt(t, s, phi, kind));
        }
  return acc.finish();
}

inline CheckOutcome run_sample_space_bijection(const CheckContext& ctx) {
  // outcome index -> number ket is one-to-one onto an orthonormal family
  OutcomeAccumulator acc;
  for (int t = 1; t <= std::min(ctx.config.t_max, 6); ++t) {
    const std::uint64_t dim = pow2(t);
    for (std::uint64_t j = 0; j < dim; ++j)
      for (std::uint64_t k = 0; k < dim; ++k) {
        const Complex ip = inner_product(number_ket(j, t), number_ket(k, t));
        const Complex expected = j == k ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
        acc.expect_near(ip, expected, 1e-12,
                        "t=" + std::to_string(t) + " j=" + std::to_string(j) +
                            " k=" + std::to_string(k));
      }
  }
  return acc.finish();
}

inline CheckOutcome run_outcome_prob(const CheckContext& ctx) {
  // Born rule: the per-instance path agrees with |<m| (dense QPE gate) input|^2
  OutcomeAccumulator acc;
  std::uint64_t salt = 0;
  for (int t = 1; t <= std::min(ctx.config.t_max, 4); ++t)
    for (int s : ctx.config.s_values)
      for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 4))
        for (const auto& [inst, kind] : instances_for(ctx, t, s, phi, ++salt)) {
          const MeasurementDistribution dist = output_distribution(inst);
          const UnitaryMatrix gate = build_qpe(inst.unitary, t);
          const StateVector full =
              apply(gate, tensor_vec(plus_register(t), inst.eigenvector));
          const std::uint64_t second_dim = pow2(s);
          for (std::uint64_t m = 0; m < pow2(t); ++m) {
            double prob = 0.0;
            for (std::uint64_t x = 0; x < second_dim; ++x)
              prob += std::norm(full[m * second_dim + x]);
            acc.expect_near(dist.probs[m], prob, 1e-10,
                            fmt(t, s, phi, kind) + " m=" + std::to_string(m));
          }
        }
  return acc.finish();
}

inline CheckOutcome run_Omega_is_sample_space(const CheckContext& ctx) {
  // mutually exclusive, collectively exhaustive: probabilities lie in [0,1],
  // sum to 1, and add over disjoint outcome sets
  OutcomeAccumulator acc;
  std::uint64_t salt = 0;
  for (int t = 1; t <= ctx.config.t_max; ++t)
    for (int s : ctx.config.s_values)
      for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 8))
        for (const auto& [inst, kind] : instances_for(ctx, t, s, phi, ++salt)) {
          const MeasurementDistribution dist = output_distribution(inst);
          double total = 0.0, even = 0.0, odd = 0.0;
          for (std::uint64_t m = 0; m < dist.probs.size(); ++m) {
            const double p = dist.probs[m];
            acc.expect_true(p >= 0.0 && p <= 1.0 + 1e-12, fmt(t, s, phi, kind));
            total += p;
            (m % 2 ? odd : even) += p;
          }
          acc.expect_near(total, 1.0, 1e-9, fmt(t, s, phi, kind));
          acc.expect_near(even + odd, total, 1e-12, fmt(t, s, phi, kind));
        }
  return acc.finish();
}

// ---------------------------------------------------------------------------
// Major theorems: psi_t and the alpha amplitude chain

inline CheckOutcome run_psi_t_formula(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 1; t <= std::min(ctx.config.t_max + 2, 10); ++t)
    for (const Phase& phi : grid_for(ctx, std::min(t, 6), PhaseKind::mixed)) {
      const double worst =
          max_abs_diff(psi_t_tensor(phi.value(), t), psi_t_sum(phi.value(), t));
      acc.expect_near(worst, 0.0, ctx.config.elementwise_tol, fmt(t, phi));
    }
  return acc.finish();
}

inline CheckOutcome run_alpha_m_evaluation(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 1; t <= ctx.config.t_max; ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 4)) {
      const StateVector psi = big_psi(phi.value(), t);
      const std::int64_t dim = static_cast<std::int64_t>(pow2(t));
      const std::int64_t step = std::max<std::int64_t>(1, dim / 16);
      for (std::int64_t m = 0; m < dim; m += step) {
        const Complex via_formula = alpha_m_eval(phi.value(), t, m);
        const Complex via_inner = inner_product(number_ket(m, t), psi);
        acc.expect_near(via_formula, via_inner, ctx.config.elementwise_tol,
                        fmt(t, phi) + " m=" + std::to_string(m));
      }
    }
  // against the simulated first-register state
  for (int t = 1; t <= std::min(ctx.config.t_max, 6); ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 4)) {
      const StateVector simulated =
          apply(inv_qft(t), stage2_state(diagonal_instance(t, 1, phi)));
      const std::int64_t dim = static_cast<std::int64_t>(pow2(t));
      for (std::int64_t m = 0; m < dim; ++m)
        acc.expect_near(alpha_m_eval(phi.value(), t, m), simulated[m], 1e-10,
                        fmt(t, phi) + " m=" + std::to_string(m) + " (simulated)");
    }
  return acc.finish();
}

inline CheckOutcome run_alpha_ideal_case(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 1; t <= ctx.config.t_max; ++t) {
    const std::uint64_t dim = pow2(t);
    const std::uint64_t step = std::max<std::uint64_t>(1, dim / 32);
    for (std::uint64_t k = 0; k < dim; k += step) {
      const Phase phi = Phase::dyadic(k, t);
      const Complex a = alpha_m_eval(phi.value(), t, static_cast<std::int64_t>(k));
      acc.expect_near(a, Complex{1.0, 0.0}, ctx.config.elementwise_tol, fmt(t, phi));
    }
  }
  return acc.finish();
}

inline CheckOutcome run_qpe_exact(const CheckContext& ctx) {
  // full dyadic sweep, both instance kinds: probs[2^t phi] = 1
  OutcomeAccumulator acc;
  std::uint64_t salt = 0;
  for (int t = 1; t <= ctx.config.t_max; ++t)
    for (int s : ctx.config.s_values)
      for (std::uint64_t k = 0; k < pow2(t); ++k) {
        const Phase phi = Phase::dyadic(k, t);
        for (const auto& [inst, kind] : instances_for(ctx, t, s, phi, ++salt)) {
          const MeasurementDistribution dist = output_distribution(inst);
          acc.expect_gt(dist.probs[k], 1.0 - 1e-10, 0.0, fmt(t, s, phi, kind));
          const double residual = dist.total() - dist.probs[k];
          acc.expect_le(residual, 1e-10, 0.0, fmt(t, s, phi, kind));
        }
      }
  return acc.finish();
}

inline CheckOutcome run_alpha_m_mod_evaluation(const CheckContext& ctx) {
  // the DFT sum with any integer m equals alpha_{m mod 2^t}
  OutcomeAccumulator acc;
  for (int t = 1; t <= std::min(ctx.config.t_max, 6); ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 4)) {
      const std::int64_t dim = static_cast<std::int64_t>(pow2(t));
      for (std::int64_t m = -dim; m < 2 * dim; m += std::max<std::int64_t>(1, dim / 4)) {
        Complex raw{0.0, 0.0};
        for (std::int64_t k = 0; k < dim; ++k) {
          const double dft_turns =
              static_cast<double>(mod_add(k * m, 0, t)) / static_cast<double>(dim);
          const double phase_turns = std::fmod(phi.value() * static_cast<double>(k), 1.0);
          raw += unit_phase(-kTau * dft_turns) * unit_phase(kTau * phase_turns);
        }
        raw /= static_cast<double>(dim);
        const Complex reduced = alpha_m_eval(phi.value(), t, mod_add(m, 0, t));
        acc.expect_near(raw, reduced, ctx.config.elementwise_tol,
                        fmt(t, phi) + " m=" + std::to_string(m));
      }
    }
  return acc.finish();
}

inline CheckOutcome run_alpha_m_mod_as_geometric_sum(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 1; t <= ctx.config.t_max; ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 4)) {
      const std::int64_t dim = static_cast<std::int64_t>(pow2(t));
      for (std::int64_t m = -dim; m < 2 * dim; m += std::max<std::int64_t>(1, dim / 8)) {
        const Complex geometric = alpha_geom(phi.value(), t, m);
        const Complex reduced = alpha_m_eval(phi.value(), t, mod_add(m, 0, t));
        acc.expect_near(geometric, reduced, ctx.config.elementwise_tol,
                        fmt(t, phi) + " m=" + std::to_string(m));
      }
    }
  return acc.finish();
}

// ---------------------------------------------------------------------------
// Major theorems: best-outcome guarantee

inline CheckOutcome run_best_guarantee_delta_nonzero(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  const double floor_value = 4.0 / (kPi * kPi);
  for (int t = 2; t <= ctx.config.t_max; ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::nondyadic)) {
      const PhaseGeometry g = PhaseGeometry::from(phi, t);
      acc.expect_true(!g.delta_floor_is_zero, fmt(t, phi));
      const double prob = std::norm(alpha_geom(phi.value(), t, g.best_round));
      acc.expect_gt(prob, floor_value, ctx.config.strict_margin, fmt(t, phi));
    }
  return acc.finish();
}

inline CheckOutcome run_best_guarantee(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  const double floor_value = 4.0 / (kPi * kPi);
  for (int t = 2; t <= ctx.config.t_max; ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 8)) {
      const PhaseGeometry g = PhaseGeometry::from(phi, t);
      const double prob = std::norm(alpha_geom(phi.value(), t, g.best_round));
      acc.expect_gt(prob, floor_value, ctx.config.strict_margin, fmt(t, phi));
    }
  return acc.finish();
}

inline CheckOutcome run_qpe_best_guarantee(const CheckContext& ctx) {
  // simulator route over both instance kinds
  OutcomeAccumulator acc;
  const double floor_value = 4.0 / (kPi * kPi);
  std::uint64_t salt = 0;
  for (int t = 2; t <= ctx.config.t_max; ++t)
    for (int s : ctx.config.s_values)
      for (const Phase& phi : grid_for(ctx, t, PhaseKind::nondyadic))
        for (const auto& [inst, kind] : instances_for(ctx, t, s, phi, ++salt)) {
          const MeasurementDistribution dist = output_distribution(inst);
          const PhaseGeometry g = PhaseGeometry::from(phi, t);
          const double prob = dist.probs[mod_add(g.best_round, 0, t)];
          acc.expect_gt(prob, floor_value, ctx.config.strict_margin, fmt(t, s, phi, kind));
        }
  return acc.finish();
}

// ---------------------------------------------------------------------------
// Major theorems: failure machinery

inline CheckOutcome run_alpha_summed(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 2; t <= ctx.config.t_max; ++t) {
    const std::int64_t half = static_cast<std::int64_t>(pow2(t - 1));
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::nondyadic)) {
      const PhaseGeometry g = PhaseGeometry::from(phi, t);
      for (std::int64_t ell = -half + 1; ell <= half; ++ell) {
        if (ell == 0) continue;
        const Complex closed = alpha_closed(phi, t, ell);
        const Complex geometric = alpha_geom(phi.value(), t, g.best_floor + ell);
        acc.expect_near(closed, geometric, 1e-11, fmt(t, phi) + " ell=" + std::to_string(ell));
      }
    }
    // exact-phase branch: the closed form returns exactly zero
    const Phase dyadic = Phase::dyadic(pow2(t) / 3 + 1, t);
    for (std::int64_t ell : {std::int64_t{1}, std::int64_t{-1}, half}) {
      const Complex closed = alpha_closed(dyadic, t, ell);
      acc.expect_true(closed == Complex{0.0, 0.0}, fmt(t, dyadic) + " ell=" + std::to_string(ell));
    }
  }
  return acc.finish();
}

inline CheckOutcome run_fail_sum_prob_conds_equiv_lemma(const CheckContext& ctx) {
  // {m : |m - b_f|_mod > e} equals {b_f (+) ell : ell in the two fail ranges}
  OutcomeAccumulator acc;
  for (int t = 3; t <= ctx.config.t_max; ++t) {
    const std::int64_t dim = static_cast<std::int64_t>(pow2(t));
    const std::int64_t half = dim / 2;
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 4)) {
      const PhaseGeometry g = PhaseGeometry::from(phi, t);
      const std::int64_t e_max = half - 2;
      for (std::int64_t e = 1; e <= e_max; e += std::max<std::int64_t>(1, e_max / 4)) {
        std::vector<bool> by_condition(dim, false), by_ranges(dim, false);
        for (std::int64_t m = 0; m < dim; ++m)
          by_condition[m] = mod_abs_int(m - g.best_floor, dim) > e;
        for (std::int64_t ell = -half + 1; ell <= -(e + 1); ++ell)
          by_ranges[mod_add(g.best_floor, ell, t)] = true;
        for (std::int64_t ell = e + 1; ell <= half; ++ell)
          by_ranges[mod_add(g.best_floor, ell, t)] = true;
        acc.expect_true(by_condition == by_ranges, fmt(t, phi) + " e=" + std::to_string(e));
      }
    }
  }
  return acc.finish();
}

inline CheckOutcome run_fail_sum(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 3; t <= ctx.config.t_max; ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 4)) {
      const MeasurementDistribution dist = output_distribution(diagonal_instance(t, 1, phi));
      const std::int64_t e_max = static_cast<std::int64_t>(pow2(t - 1)) - 2;
      for (std::int64_t e = 1; e <= e_max; e += std::max<std::int64_t>(1, e_max / 8)) {
        const double by_def = fail_prob(dist, phi, e, FailProbMode::definition);
        const double by_sum = fail_prob(dist, phi, e, FailProbMode::sum);
        acc.expect_near(by_def, by_sum, 1e-10, fmt(t, phi) + " e=" + std::to_string(e));
      }
    }
  return acc.finish();
}

inline CheckOutcome run_alpha_sqrd_upper_bound(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 2; t <= ctx.config.t_max; ++t) {
    const std::int64_t half = static_cast<std::int64_t>(pow2(t - 1));
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::nondyadic)) {
      const PhaseGeometry g = PhaseGeometry::from(phi, t);
      for (std::int64_t ell = -half + 1; ell <= half; ++ell) {
        if (ell == 0) continue;
        const double actual = std::norm(alpha_closed(phi, t, ell));
        const double bound = alpha_sqrd_bound(t, g.delta_floor, ell);
        acc.expect_le(actual, bound, 1e-12, fmt(t, phi) + " ell=" + std::to_string(ell));
      }
    }
  }
  return acc.finish();
}

inline CheckOutcome run_failure_upper_bound_lemma(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 3; t <= ctx.config.t_max; ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::nondyadic)) {
      const MeasurementDistribution dist = output_distribution(diagonal_instance(t, 1, phi));
      const PhaseGeometry g = PhaseGeometry::from(phi, t);
      const std::int64_t e_max = static_cast<std::int64_t>(pow2(t - 1)) - 2;
      for (std::int64_t e = 1; e <= e_max; e += std::max<std::int64_t>(1, e_max / 8)) {
        const double fail = fail_prob(dist, phi, e, FailProbMode::definition);
        const double lemma = failure_bound_lemma_form(t, g.delta_floor, e);
        acc.expect_le(fail, lemma, 1e-12, fmt(t, phi) + " e=" + std::to_string(e));
      }
    }
  return acc.finish();
}

inline CheckOutcome run_failure_upper_bound(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 3; t <= ctx.config.t_max; ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 4)) {
      const MeasurementDistribution dist = output_distribution(diagonal_instance(t, 1, phi));
      const std::int64_t e_max = static_cast<std::int64_t>(pow2(t - 1)) - 2;
      for (std::int64_t e = 1; e <= e_max; ++e) {
        const double fail = fail_prob(dist, phi, e, FailProbMode::definition);
        acc.expect_le(fail, tight_failure_bound(e), 1e-12,
                      fmt(t, phi) + " e=" + std::to_string(e));
      }
    }
  return acc.finish();
}

inline CheckOutcome run_success_complements_failure(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 3; t <= ctx.config.t_max; ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 4)) {
      const MeasurementDistribution dist = output_distribution(diagonal_instance(t, 1, phi));
      const std::int64_t e_max = static_cast<std::int64_t>(pow2(t - 1)) - 2;
      for (std::int64_t e = 1; e <= e_max; e += std::max<std::int64_t>(1, e_max / 8)) {
        const double success = success_prob(dist, phi, e);
        const double fail = fail_prob(dist, phi, e, FailProbMode::definition);
        acc.expect_near(success, 1.0 - fail, 1e-10, fmt(t, phi) + " e=" + std::to_string(e));
      }
    }
  return acc.finish();
}

// ---------------------------------------------------------------------------
// Major theorems: precision guarantee

inline std::vector<std::pair<int, double>> precision_grid() {
  std::vector<std::pair<int, double>> grid;
  for (int n = 1; n <= 4; ++n)
    for (double eps : {1.0, 0.5, 0.25, 0.1}) grid.emplace_back(n, eps);
  return grid;
}

inline CheckOutcome run_precision_guarantee_lemma_01(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (const auto& [n, eps] : precision_grid()) {
    const int t = t_required(PrecisionSpec(n, eps));
    const double e = static_cast<double>(e_value(t, n));
    const double lhs = 1.0 - 1.0 / (2.0 * e) - 1.0 / (4.0 * e * e);
    acc.expect_gt(lhs, 1.0 - eps, ctx.config.strict_margin,
                  "n=" + std::to_string(n) + " eps=" + std::to_string(eps));
  }
  return acc.finish();
}

inline CheckOutcome run_precision_guarantee_lemma_02(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int n = 1; n <= 4; ++n)
    for (int t = n + 2; t <= std::min({ctx.config.t_max + 2, 10, n + 6}); ++t) {
      const std::int64_t dim = static_cast<std::int64_t>(pow2(t));
      const std::int64_t e = e_value(t, n);
      for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 4)) {
        const PhaseGeometry g = PhaseGeometry::from(phi, t);
        for (std::int64_t m = 0; m < dim; ++m) {
          if (mod_abs_int(m - g.best_floor, dim) > e) continue;
          const double dist =
              mod_abs(static_cast<double>(m) / static_cast<double>(dim) - phi.value(), 1.0);
          acc.expect_le(dist, std::ldexp(1.0, -n), 1e-15,
                        fmt(t, phi) + " n=" + std::to_string(n) + " m=" + std::to_string(m));
        }
      }
    }
  return acc.finish();
}

inline double success_within_radius(const MeasurementDistribution& dist, double phi, int n) {
  const std::int64_t dim = static_cast<std::int64_t>(pow2(dist.t));
  const double radius = std::ldexp(1.0, -n);
  double total = 0.0;
  for (std::int64_t m = 0; m < dim; ++m) {
    const double d = mod_abs(static_cast<double>(m) / static_cast<double>(dim) - phi, 1.0);
    if (d <= radius + 1e-15) total += dist.probs[m];
  }
  return total;
}

inline CheckOutcome run_precision_guarantee(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (const auto& [n, eps] : precision_grid()) {
    const int t = t_required(PrecisionSpec(n, eps));
    if (t > std::min(ctx.config.t_max + 2, 10)) continue;  // over cap, skipped with note
    const std::int64_t e = e_value(t, n);
    const bool e_route = e <= static_cast<std::int64_t>(pow2(t - 1)) - 2;
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 8)) {
      const QpeInstance inst = diagonal_instance(t, 1, phi);
      const MeasurementDistribution dist = output_distribution(inst);
      const std::string params =
          fmt(t, phi) + " n=" + std::to_string(n) + " eps=" + std::to_string(eps);
      acc.expect_le(1.0 - eps, success_within_radius(dist, phi.value(), n), 1e-12, params);
      if (e_route) {
        // intermediate route through the e-tolerance machinery agrees
        acc.expect_le(1.0 - eps, success_prob(dist, phi, e), 1e-12, params + " (e route)");
      }
    }
  }
  return acc.finish();
}

inline CheckOutcome run_qpe_precision_guarantee(const CheckContext& ctx) {
  // universal closure: all s values and both instance kinds
  OutcomeAccumulator acc;
  std::uint64_t salt = 0;
  for (const auto& [n, eps] : precision_grid()) {
    const int t = t_required(PrecisionSpec(n, eps));
    if (t > std::min(ctx.config.t_max + 2, 10)) continue;
    for (int s : ctx.config.s_values)
      for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 8))
        for (const auto& [inst, kind] : instances_for(ctx, t, s, phi, ++salt)) {
          const MeasurementDistribution dist = output_distribution(inst);
          acc.expect_le(1.0 - eps, success_within_radius(dist, phi.value(), n), 1e-12,
                        fmt(t, s, phi, kind) + " n=" + std::to_string(n) +
                            " eps=" + std::to_string(eps));
        }
  }
  return acc.finish();
}

// ---------------------------------------------------------------------------
// Minor theorems: intervals, closure, and exactness facts

inline CheckOutcome run_mod_add_closure(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 1; t <= ctx.config.t_max; ++t) {
    const std::int64_t dim = static_cast<std::int64_t>(pow2(t));
    for (std::int64_t a = -2 * dim; a <= 2 * dim; a += std::max<std::int64_t>(1, dim / 2))
      for (std::int64_t b = -dim; b <= dim; b += std::max<std::int64_t>(1, dim / 4)) {
        const std::int64_t r = mod_add(a, b, t);
        acc.expect_true(r >= 0 && r < dim && (r - a - b) % dim == 0,
                        "t=" + std::to_string(t) + " a=" + std::to_string(a) +
                            " b=" + std::to_string(b));
      }
  }
  return acc.finish();
}

inline CheckOutcome run_modabs_in_full_domain_simp(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 1; t <= ctx.config.t_max; ++t) {
    const std::int64_t half = static_cast<std::int64_t>(pow2(t - 1));
    for (std::int64_t l = -half + 1; l <= half; ++l)
      acc.expect_true(mod_abs_int(l, 2 * half) == std::abs(l),
                      "t=" + std::to_string(t) + " l=" + std::to_string(l));
  }
  return acc.finish();
}

inline CheckOutcome run_best_floor_is_in_m_domain(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 1; t <= ctx.config.t_max; ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed)) {
      const PhaseGeometry g = PhaseGeometry::from(phi, t);
      acc.expect_true(g.best_floor >= 0 && g.best_floor < static_cast<std::int64_t>(pow2(t)),
                      fmt(t, phi));
    }
  return acc.finish();
}

inline CheckOutcome run_scaled_delta_b_floor_in_interval(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 1; t <= ctx.config.t_max; ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed)) {
      const double scaled = std::ldexp(PhaseGeometry::from(phi, t).delta_floor, t);
      acc.expect_true(scaled >= 0.0, fmt(t, phi));
      acc.expect_gt(1.0, scaled, 0.0, fmt(t, phi));  // exclusive upper end
    }
  return acc.finish();
}

inline CheckOutcome run_scaled_delta_b_round_in_interval(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 1; t <= ctx.config.t_max; ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed)) {
      const double scaled = std::ldexp(PhaseGeometry::from(phi, t).delta_round, t);
      acc.expect_true(scaled >= -0.5, fmt(t, phi));
      acc.expect_gt(0.5, scaled, 0.0, fmt(t, phi));
    }
  return acc.finish();
}

inline CheckOutcome run_delta_b_in_interval(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 1; t <= ctx.config.t_max; ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed)) {
      const PhaseGeometry g = PhaseGeometry::from(phi, t);
      for (double d : {g.delta_floor, g.delta_round}) {
        acc.expect_gt(d, -0.5, 0.0, fmt(t, phi));
        acc.expect_true(d <= 0.5, fmt(t, phi));
      }
    }
  return acc.finish();
}

inline CheckOutcome run_phase_from_best_with_delta_b(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 1; t <= ctx.config.t_max; ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed)) {
      const PhaseGeometry g = PhaseGeometry::from(phi, t);
      const double dim = std::ldexp(1.0, t);
      acc.expect_near(phi.value(), static_cast<double>(g.best_floor) / dim + g.delta_floor,
                      1e-15, fmt(t, phi));
      acc.expect_near(phi.value(), static_cast<double>(g.best_round) / dim + g.delta_round,
                      1e-15, fmt(t, phi));
    }
  return acc.finish();
}

inline CheckOutcome run_delta_b_is_zero_or_non_int(const CheckContext& ctx) {
  // delta_b lies in (-1/2, 1/2], so "zero or not an integer" amounts to the
  // exact zero flag agreeing with an exact rational integrality test.
  OutcomeAccumulator acc;
  for (int t = 1; t <= ctx.config.t_max; ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed)) {
      const PhaseGeometry g = PhaseGeometry::from(phi, t);
      for (std::int64_t b : {g.best_floor, g.best_round}) {
        // delta_b integral iff 2^t*num == b*den (delta zero), given |delta|<=1/2
        const bool integral = phi.num() * static_cast<std::int64_t>(pow2(t)) == b * phi.den();
        const double d = phi.value() - static_cast<double>(b) / std::ldexp(1.0, t);
        acc.expect_true(integral ? std::abs(d) < 1e-15 : std::abs(d - std::round(d)) > 0.0,
                        fmt(t, phi) + " b=" + std::to_string(b));
      }
    }
  return acc.finish();
}

inline CheckOutcome run_scaled_delta_b_is_zero_or_non_int(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 1; t <= ctx.config.t_max; ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed)) {
      const PhaseGeometry g = PhaseGeometry::from(phi, t);
      for (double d : {g.delta_floor, g.delta_round}) {
        const double scaled = std::ldexp(d, t);
        acc.expect_true(scaled == 0.0 || std::abs(scaled - std::round(scaled)) > 0.0, fmt(t, phi));
      }
    }
  return acc.finish();
}

inline CheckOutcome run_scaled_delta_b_not_eq_nonzeroInt(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 1; t <= ctx.config.t_max; ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed)) {
      const PhaseGeometry g = PhaseGeometry::from(phi, t);
      for (double d : {g.delta_floor, g.delta_round}) {
        const double scaled = std::ldexp(d, t);
        // distance to the nearest nonzero integer
        const double nearest = std::max(1.0, std::round(std::abs(scaled)));
        acc.expect_gt(std::abs(std::abs(scaled) - nearest), 0.0, 0.0, fmt(t, phi));
      }
    }
  return acc.finish();
}

inline CheckOutcome run_delta_b_not_eq_scaledNonzeroInt(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 1; t <= ctx.config.t_max; ++t) {
    const std::int64_t half = static_cast<std::int64_t>(pow2(t - 1));
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 4)) {
      const PhaseGeometry g = PhaseGeometry::from(phi, t);
      for (double d : {g.delta_floor, g.delta_round})
        for (std::int64_t ell = -half + 1; ell <= half; ++ell) {
          if (ell == 0) continue;
          const double target = static_cast<double>(ell) / std::ldexp(1.0, t);
          acc.expect_gt(std::abs(d - target), 0.0, 0.0,
                        fmt(t, phi) + " ell=" + std::to_string(ell));
        }
    }
  }
  return acc.finish();
}

inline CheckOutcome run_non_int_delta_b_diff(const CheckContext& ctx) {
  // delta_b - ell/2^t stays clear of every integer for nonzero ell
  OutcomeAccumulator acc;
  for (int t = 1; t <= ctx.config.t_max; ++t) {
    const std::int64_t half = static_cast<std::int64_t>(pow2(t - 1));
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 4)) {
      const PhaseGeometry g = PhaseGeometry::from(phi, t);
      for (double d : {g.delta_floor, g.delta_round})
        for (std::int64_t ell = -half + 1; ell <= half; ++ell) {
          if (ell == 0) continue;
          const double diff = d - static_cast<double>(ell) / std::ldexp(1.0, t);
          acc.expect_gt(mod_abs(diff, 1.0), 0.0, 0.0,
                        fmt(t, phi) + " ell=" + std::to_string(ell));
        }
    }
  }
  return acc.finish();
}

inline CheckOutcome run_delta_b_floor_diff_in_interval(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 1; t <= ctx.config.t_max; ++t) {
    const std::int64_t half = static_cast<std::int64_t>(pow2(t - 1));
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 4)) {
      const double d = PhaseGeometry::from(phi, t).delta_floor;
      for (std::int64_t ell = -half + 1; ell <= half; ++ell) {
        const double diff = d - static_cast<double>(ell) / std::ldexp(1.0, t);
        acc.expect_true(diff >= -0.5, fmt(t, phi) + " ell=" + std::to_string(ell));
        acc.expect_gt(0.5, diff, 0.0, fmt(t, phi) + " ell=" + std::to_string(ell));
      }
    }
  }
  return acc.finish();
}

inline CheckOutcome run_scaled_abs_delta_b_floor_diff_interval(const CheckContext& ctx) {
  // pi |delta_{b_f} - ell/2^t| in (0, pi/2] for nonzero ell
  OutcomeAccumulator acc;
  for (int t = 1; t <= ctx.config.t_max; ++t) {
    const std::int64_t half = static_cast<std::int64_t>(pow2(t - 1));
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 4)) {
      const double d = PhaseGeometry::from(phi, t).delta_floor;
      for (std::int64_t ell = -half + 1; ell <= half; ++ell) {
        if (ell == 0) continue;
        const double value = kPi * std::abs(d - static_cast<double>(ell) / std::ldexp(1.0, t));
        acc.expect_gt(value, 0.0, 0.0, fmt(t, phi) + " ell=" + std::to_string(ell));
        acc.expect_le(value, kPi / 2.0, 1e-15, fmt(t, phi) + " ell=" + std::to_string(ell));
      }
    }
  }
  return acc.finish();
}

inline CheckOutcome run_e_value_ge_two(const CheckContext&) {
  OutcomeAccumulator acc;
  for (const auto& [n, eps] : precision_grid()) {
    const int t = t_required(PrecisionSpec(n, eps));
    acc.expect_true(e_value(t, n) >= 2, "n=" + std::to_string(n) + " eps=" + std::to_string(eps));
  }
  return acc.finish();
}

inline CheckOutcome run_e_value_in_e_domain(const CheckContext&) {
  // Needs n >= 2: at n = 1 the induced e = 2^(t-1)-1 sits one past the
  // admissible e range, so the domain lemma is stated away from that edge.
  OutcomeAccumulator acc;
  for (const auto& [n, eps] : precision_grid()) {
    if (n < 2) continue;
    const int t = t_required(PrecisionSpec(n, eps));
    const std::int64_t e = e_value(t, n);
    acc.expect_true(e >= 1 && e <= static_cast<std::int64_t>(pow2(t - 1)) - 2,
                    "n=" + std::to_string(n) + " eps=" + std::to_string(eps));
  }
  return acc.finish();
}

inline CheckOutcome run_psi_t_ket_is_normalized_vec(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 1; t <= ctx.config.t_max; ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 8))
      acc.expect_near(psi_t_tensor(phi.value(), t).norm(), 1.0, 1e-10, fmt(t, phi));
  return acc.finish();
}

inline CheckOutcome run_Psi_ket_is_normalized_vec(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 1; t <= ctx.config.t_max; ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::mixed, 8))
      acc.expect_near(big_psi(phi.value(), t).norm(), 1.0, 1e-10, fmt(t, phi));
  return acc.finish();
}

inline CheckOutcome run_pfail_in_real(const CheckContext& ctx) {
  OutcomeAccumulator acc;
  for (int t = 3; t <= ctx.config.t_max; ++t)
    for (const Phase& phi : grid_for(ctx, t, PhaseKind::nondyadic)) {
      const std::int64_t e_max = static_cast<std::int64_t>(pow2(t - 1)) - 2;
      for (std::int64_t e = 1; e <= e_max; e += std::max<std::int64_t>(1, e_max / 4)) {
        const double fail =
            fail_prob(output_distribution(diagonal_instance(t, 1, phi)), phi, e,
                      FailProbMode::sum);
        acc.expect_true(std::isfinite(fail) && fail >= 0.0 && fail <= 1.0 + 1e-12,
                        fmt(t, phi) + " e=" + std::to_string(e));
      }
    }
  return acc.finish();
}

// ---------------------------------------------------------------------------

inline std::vector<CheckNode> all_nodes() {
  std::vector<CheckNode> nodes;
  const auto add = [&](std::string name, std::vector<std::string> prereqs,
                       CheckOutcome (*runner)(const CheckContext&), std::string params) {
    nodes.push_back(CheckNode{std::move(name), std::move(prereqs), runner, std::move(params)});
  };

  // minor closure/interval facts
  add("_mod_add_closure", {}, run_mod_add_closure, "integer grid incl. negatives, t<=t_max");
  add("_modabs_in_full_domain_simp", {}, run_modabs_in_full_domain_simp,
      "l in (-2^(t-1), 2^(t-1)], t<=t_max");
  add("_best_floor_is_in_m_domain", {}, run_best_floor_is_in_m_domain, "mixed phases, t<=t_max");
  add("_scaled_delta_b_floor_in_interval", {}, run_scaled_delta_b_floor_in_interval,
      "mixed phases, t<=t_max");
  add("_scaled_delta_b_round_in_interval", {}, run_scaled_delta_b_round_in_interval,
      "mixed phases, t<=t_max");
  add("_delta_b_in_interval",
      {"_scaled_delta_b_floor_in_interval", "_scaled_delta_b_round_in_interval"},
      run_delta_b_in_interval, "mixed phases, t<=t_max");
  add("_phase_from_best_with_delta_b", {}, run_phase_from_best_with_delta_b,
      "mixed phases, both estimates");
  add("_delta_b_is_zero_or_non_int", {"_delta_b_in_interval"}, run_delta_b_is_zero_or_non_int,
      "mixed phases, exact rational split");
  add("_scaled_delta_b_is_zero_or_non_int", {"_delta_b_is_zero_or_non_int"},
      run_scaled_delta_b_is_zero_or_non_int, "mixed phases");
  add("_scaled_delta_b_not_eq_nonzeroInt", {"_scaled_delta_b_is_zero_or_non_int"},
      run_scaled_delta_b_not_eq_nonzeroInt, "mixed phases");
  add("_delta_b_not_eq_scaledNonzeroInt", {"_scaled_delta_b_not_eq_nonzeroInt"},
      run_delta_b_not_eq_scaledNonzeroInt, "mixed phases, all nonzero ell");
  add("_delta_b_floor_diff_in_interval", {"_scaled_delta_b_floor_in_interval"},
      run_delta_b_floor_diff_in_interval, "mixed phases, all ell");
  add("_non_int_delta_b_diff",
      {"_delta_b_not_eq_scaledNonzeroInt", "_delta_b_floor_diff_in_interval"},
      run_non_int_delta_b_diff, "mixed phases, all nonzero ell");
  add("_scaled_abs_delta_b_floor_diff_interval", {"_non_int_delta_b_diff"},
      run_scaled_abs_delta_b_floor_diff_interval, "mixed phases, all nonzero ell");
  add("_e_value_ge_two", {}, run_e_value_ge_two, "n in 1..4, eps in {1,.5,.25,.1}");
  add("_e_value_in_e_domain", {"_e_value_ge_two"}, run_e_value_in_e_domain,
      "n in 2..4, eps in {1,.5,.25,.1}");

  // circuit states and sample space
  add("_psi_t_output", {}, run_psi_t_output, "t<=t_max, s values, both instance kinds");
  add("_Psi_output", {"_psi_t_output"}, run_Psi_output, "t<=t_max, s values, both kinds");
  add("_sample_space_bijection", {}, run_sample_space_bijection, "all ket pairs, t<=6");
  add("_outcome_prob", {"_Psi_output", "_sample_space_bijection"}, run_outcome_prob,
      "dense-gate cross-check, t<=4");
  add("_Omega_is_sample_space", {"_sample_space_bijection", "_outcome_prob"},
      run_Omega_is_sample_space, "normalization and additivity, t<=t_max");
  add("_psi_t_ket_is_normalized_vec", {"_psi_t_formula"}, run_psi_t_ket_is_normalized_vec,
      "mixed phases, t<=t_max");
  add("_Psi_ket_is_normalized_vec", {"_psi_t_ket_is_normalized_vec"},
      run_Psi_ket_is_normalized_vec, "mixed phases, t<=t_max");

  // psi_t and the alpha chain
  add("_psi_t_formula", {"_psi_t_output"}, run_psi_t_formula, "tensor vs sum, t<=10");
  add("_alpha_m_evaluation", {"_psi_t_formula", "_Psi_output"}, run_alpha_m_evaluation,
      "formula vs inner product vs simulator");
  add("_alpha_ideal_case", {"_alpha_m_evaluation"}, run_alpha_ideal_case,
      "dyadic phases, t<=t_max");
  add("qpe_exact", {"_alpha_ideal_case", "_outcome_prob", "_Omega_is_sample_space"},
      run_qpe_exact, "full dyadic sweep, s values, both kinds");
  add("_alpha_m_mod_evaluation", {"_alpha_m_evaluation", "_mod_add_closure"},
      run_alpha_m_mod_evaluation, "out-of-range m, t<=6");
  add("_alpha_m_mod_as_geometric_sum", {"_alpha_m_mod_evaluation"},
      run_alpha_m_mod_as_geometric_sum, "geometric vs direct sum, any m");

  // best-outcome guarantee
  add("_best_guarantee_delta_nonzero",
      {"_alpha_m_mod_as_geometric_sum", "_scaled_delta_b_round_in_interval",
       "_delta_b_in_interval"},
      run_best_guarantee_delta_nonzero, "nondyadic grid, t in 2..t_max");
  add("_best_guarantee", {"_best_guarantee_delta_nonzero", "qpe_exact"}, run_best_guarantee,
      "mixed grid, t in 2..t_max");
  add("qpe_best_guarantee", {"_best_guarantee"}, run_qpe_best_guarantee,
      "simulator route, nondyadic grid, s values, both kinds");

  // failure machinery
  add("_alpha_summed",
      {"_alpha_m_mod_as_geometric_sum", "_phase_from_best_with_delta_b", "_non_int_delta_b_diff"},
      run_alpha_summed, "closed form vs geometric sum, all ell");
  add("_fail_sum_prob_conds_equiv_lemma",
      {"_modabs_in_full_domain_simp", "_best_floor_is_in_m_domain"},
      run_fail_sum_prob_conds_equiv_lemma, "index-set equality, exhaustive outcomes");
  add("_fail_sum",
      {"_alpha_summed", "_fail_sum_prob_conds_equiv_lemma", "_Omega_is_sample_space"},
      run_fail_sum, "definition vs sum mode");
  add("_alpha_sqrd_upper_bound",
      {"_alpha_summed", "_scaled_abs_delta_b_floor_diff_interval",
       "_scaled_delta_b_not_eq_nonzeroInt"},
      run_alpha_sqrd_upper_bound, "bound vs closed form, all ell");
  add("_failure_upper_bound_lemma", {"_fail_sum", "_alpha_sqrd_upper_bound"},
      run_failure_upper_bound_lemma, "fail <= lemma-form bound");
  add("_failure_upper_bound", {"_failure_upper_bound_lemma"}, run_failure_upper_bound,
      "fail <= 1/(2e) + 1/(4e^2), all admissible e");
  add("_success_complements_failure", {"_Omega_is_sample_space", "_pfail_in_real"},
      run_success_complements_failure, "success + fail = 1");
  add("_pfail_in_real", {"_fail_sum"}, run_pfail_in_real, "fail in [0,1]");

  // precision guarantee
  add("_precision_guarantee_lemma_01", {"_e_value_ge_two"}, run_precision_guarantee_lemma_01,
      "(n, eps) grid at t = t_required");
  add("_precision_guarantee_lemma_02",
      {"_modabs_in_full_domain_simp", "_best_floor_is_in_m_domain",
       "_scaled_delta_b_floor_in_interval"},
      run_precision_guarantee_lemma_02, "exhaustive outcomes, n<=4");
  add("_precision_guarantee",
      {"_failure_upper_bound", "_success_complements_failure", "_precision_guarantee_lemma_01",
       "_precision_guarantee_lemma_02", "_e_value_in_e_domain"},
      run_precision_guarantee, "radius and e-tolerance routes");
  add("qpe_precision_guarantee", {"_precision_guarantee"}, run_qpe_precision_guarantee,
      "(n, eps) grid, s values, both kinds");

  return nodes;
}

}  // namespace registry

inline CheckGraph build_check_graph(const RunConfig& config) {
  config.validate();
  CheckGraph graph = CheckGraph::from_nodes(registry::all_nodes());
  for (const std::string& name : config.include)
    if (!graph.contains(name)) throw config_error("unknown check in include list: " + name);
  for (const std::string& name : config.exclude)
    if (!graph.contains(name)) throw config_error("unknown check in exclude list: " + name);
  return graph;
}

}  // namespace qpecert
