#include "qpecert/analytic.hpp"

#include <cmath>
#include <gtest/gtest.h>

#include "qpecert/instances.hpp"

namespace qpecert {
namespace {

// Test-side phase grid: every fixed non-dyadic rational plus a handful of
// dyadics, kept independent of the harness configuration.
std::vector<Phase> mixed_grid(int t) {
  std::vector<Phase> grid = nondyadic_phases();
  const std::uint64_t step = std::max<std::uint64_t>(1, pow2(t) / 8);
  for (std::uint64_t k = 0; k < pow2(t); k += step) grid.push_back(Phase::dyadic(k, t));
  return grid;
}

TEST(PsiT, OneQubitWorkedExpansion) {
  const double phi = 0.3;
  const StateVector v = psi_t_tensor(phi, 1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(v[0] - inv_sqrt2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v[1] - inv_sqrt2 * unit_phase(kTau * phi)), 0.0, 1e-15);
}

TEST(PsiT, TwoQubitAmplitudesAreDirectPhases) {
  // t=2, phi=0.3: amplitude k is (1/2) e^{2 pi i phi k}
  const StateVector v = psi_t_tensor(0.3, 2);
  for (std::uint64_t k = 0; k < 4; ++k)
    EXPECT_NEAR(std::abs(v[k] - 0.5 * unit_phase(kTau * 0.3 * static_cast<double>(k))), 0.0, 1e-14);
}

TEST(PsiT, QuarterPhaseGivesQuarterTurns) {
  const StateVector v = psi_t_sum(0.25, 2);
  EXPECT_NEAR(std::abs(v[0] - Complex(0.5, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v[1] - Complex(0.0, 0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v[2] - Complex(-0.5, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v[3] - Complex(0.0, -0.5)), 0.0, 1e-15);
}

TEST(PsiT, SumFormulaMatchesTensorProduct) {
  for (int t = 1; t <= 10; ++t)
    for (const Phase& phi : mixed_grid(std::min(t, 6))) {
      const double worst = max_abs_diff(psi_t_tensor(phi.value(), t), psi_t_sum(phi.value(), t));
      EXPECT_LT(worst, 1e-12) << "t=" << t << " phi=" << phi.str();
    }
}

TEST(PsiT, StaysNormalized) {
  for (int t = 1; t <= 10; ++t)
    for (const Phase& phi : nondyadic_phases()) {
      EXPECT_TRUE(psi_t_tensor(phi.value(), t).is_normalized(1e-10));
      EXPECT_TRUE(psi_t_sum(phi.value(), t).is_normalized(1e-10));
    }
}

TEST(InductionIdentities, SumSplitShiftAndRecursion) {
  // The three identities behind the induction step, as vector equalities:
  // splitting the k-sum at 2^t, shifting the upper half down, and the
  // product recursion for psi_{t+1}.
  for (int t = 1; t <= 9; ++t)
    for (const Phase& phase : mixed_grid(4)) {
      const double phi = phase.value();
      const std::uint64_t dim_t = pow2(t);
      const std::uint64_t dim_next = 2 * dim_t;

      const auto term = [&](std::uint64_t k) {
        StateVector v(dim_next);
        v[k] = unit_phase(kTau * std::fmod(phi * static_cast<double>(k), 1.0));
        return v;
      };

      StateVector direct(dim_next), low(dim_next), high(dim_next), shifted(dim_next);
      for (std::uint64_t k = 0; k < dim_next; ++k) {
        const StateVector v = term(k);
        for (std::uint64_t i = 0; i < dim_next; ++i) direct[i] += v[i];
      }
      for (std::uint64_t k = 0; k < dim_t; ++k) {
        const StateVector v = term(k);
        for (std::uint64_t i = 0; i < dim_next; ++i) low[i] += v[i];
      }
      for (std::uint64_t k = dim_t; k < dim_next; ++k) {
        const StateVector v = term(k);
        for (std::uint64_t i = 0; i < dim_next; ++i) high[i] += v[i];
      }
      for (std::uint64_t k = 0; k < dim_t; ++k) {
        const StateVector v = term(k + dim_t);
        for (std::uint64_t i = 0; i < dim_next; ++i) shifted[i] += v[i];
      }

      StateVector split(dim_next);
      for (std::uint64_t i = 0; i < dim_next; ++i) split[i] = low[i] + high[i];
      EXPECT_LT(max_abs_diff(direct, split), 1e-12);
      EXPECT_LT(max_abs_diff(high, shifted), 1e-12);

      const StateVector recursion = tensor_vec(phase_qubit(phi, t), psi_t_tensor(phi, t));
      EXPECT_LT(max_abs_diff(psi_t_tensor(phi, t + 1), recursion), 1e-12);
    }
}

TEST(BigPsi, DyadicPhaseCollapsesToNumberKet) {
  for (int t = 1; t <= 6; ++t)
    for (std::uint64_t k = 0; k < pow2(t); ++k) {
      const StateVector psi = big_psi(Phase::dyadic(k, t).value(), t);
      EXPECT_LT(max_abs_diff(psi, number_ket(k, t)), 1e-10);
    }
}

TEST(BigPsi, ComponentsAreAlphaAmplitudes) {
  const int t = 3;
  const StateVector psi = big_psi(0.3, t);
  for (std::int64_t m = 0; m < 8; ++m) {
    const Complex via_inner = inner_product(number_ket(m, t), psi);
    EXPECT_LT(std::abs(via_inner - alpha_m_eval(0.3, t, m)), 1e-12);
  }
}

TEST(AlphaM, IdealCaseIsOne) {
  for (int t = 1; t <= 8; ++t)
    for (std::uint64_t k = 0; k < pow2(t); k += std::max<std::uint64_t>(1, pow2(t) / 8)) {
      const Complex a = alpha_m_eval(Phase::dyadic(k, t).value(), t, static_cast<std::int64_t>(k));
      EXPECT_LT(std::abs(a - Complex(1.0, 0.0)), 1e-12);
    }
}

TEST(AlphaM, ZeroPhaseKillsNonzeroOutcomes) {
  for (std::int64_t m = 1; m < 8; ++m) EXPECT_LT(std::abs(alpha_m_eval(0.0, 3, m)), 1e-13);
}

TEST(AlphaM, RejectsOutOfRangeOutcome) {
  EXPECT_THROW(alpha_m_eval(0.3, 3, -1), std::domain_error);
  EXPECT_THROW(alpha_m_eval(0.3, 3, 8), std::domain_error);
}

TEST(AlphaGeom, AgreesWithDirectSum) {
  for (int t = 1; t <= 8; ++t)
    for (const Phase& phi : mixed_grid(std::min(t, 5)))
      for (std::int64_t m = 0; m < static_cast<std::int64_t>(pow2(t));
           m += std::max<std::int64_t>(1, static_cast<std::int64_t>(pow2(t)) / 16)) {
        const Complex direct = alpha_m_eval(phi.value(), t, m);
        const Complex geometric = alpha_geom(phi.value(), t, m);
        EXPECT_LT(std::abs(direct - geometric), 1e-12)
            << "t=" << t << " phi=" << phi.str() << " m=" << m;
      }
}

TEST(AlphaGeom, PeriodicInOutcomeIndex) {
  const std::int64_t dim = 8;
  for (std::int64_t m = -dim; m < 2 * dim; ++m) {
    const Complex shifted = alpha_geom(0.3, 3, m);
    const Complex reduced = alpha_geom(0.3, 3, mod_add(m, 0, 3));
    EXPECT_LT(std::abs(shifted - reduced), 1e-12);
  }
}

TEST(AlphaGeom, UnitRatioSumsToOne) {
  EXPECT_LT(std::abs(alpha_geom(0.25, 2, 1) - Complex(1.0, 0.0)), 1e-13);
}

TEST(AlphaGeom, AmplitudesFormUnitDistribution) {
  for (const Phase& phi : nondyadic_phases()) {
    double total = 0.0;
    for (std::int64_t m = 0; m < 32; ++m) total += std::norm(alpha_geom(phi.value(), 5, m));
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
}

TEST(AlphaClosed, MatchesGeometricSum) {
  for (int t = 2; t <= 8; ++t)
    for (const Phase& phi : nondyadic_phases()) {
      const PhaseGeometry g = PhaseGeometry::from(phi, t);
      const std::int64_t half = static_cast<std::int64_t>(pow2(t - 1));
      for (std::int64_t ell = -half + 1; ell <= half; ++ell) {
        if (ell == 0) continue;
        const Complex closed = alpha_closed(phi, t, ell);
        const Complex geometric = alpha_geom(phi.value(), t, g.best_floor + ell);
        EXPECT_LT(std::abs(closed - geometric), 1e-11)
            << "t=" << t << " phi=" << phi.str() << " ell=" << ell;
        EXPECT_LE(std::abs(closed), 1.0 + 1e-12);
      }
    }
}

TEST(AlphaClosed, ExactZeroForDyadicPhase) {
  for (int t = 2; t <= 6; ++t)
    for (std::int64_t ell : {std::int64_t{1}, std::int64_t{-1}, static_cast<std::int64_t>(pow2(t - 1))}) {
      const Complex a = alpha_closed(Phase::dyadic(3 % pow2(t), t), t, ell);
      EXPECT_EQ(a, Complex(0.0, 0.0));
    }
}

TEST(AlphaClosed, DomainErrors) {
  EXPECT_THROW(alpha_closed(Phase::rational(3, 10), 3, 0), std::domain_error);
  EXPECT_THROW(alpha_closed(Phase::rational(3, 10), 3, 5), std::domain_error);
  EXPECT_THROW(alpha_closed(Phase::rational(3, 10), 3, -4), std::domain_error);
}

TEST(AlphaSqrdBound, DirectValues) {
  EXPECT_DOUBLE_EQ(alpha_sqrd_bound(3, 0.0, 1), 0.25);
  // ell=2, delta=0.05, t=3: 1/(4 (2 - 0.4)^2) = 0.09765625
  EXPECT_NEAR(alpha_sqrd_bound(3, 0.05, 2), 0.09765625, 1e-15);
  EXPECT_THROW(alpha_sqrd_bound(3, 0.25, 2), std::domain_error);  // ell == 2^t delta
  EXPECT_THROW(alpha_sqrd_bound(3, 0.05, 0), std::domain_error);
}

TEST(AlphaSqrdBound, DominatesClosedFormOnGrid) {
  for (int t = 2; t <= 8; ++t)
    for (const Phase& phi : nondyadic_phases()) {
      const PhaseGeometry g = PhaseGeometry::from(phi, t);
      const std::int64_t half = static_cast<std::int64_t>(pow2(t - 1));
      for (std::int64_t ell = -half + 1; ell <= half; ++ell) {
        if (ell == 0) continue;
        const double actual = std::norm(alpha_closed(phi, t, ell));
        const double bound = alpha_sqrd_bound(t, g.delta_floor, ell);
        EXPECT_LE(actual, bound + 1e-12)
            << "t=" << t << " phi=" << phi.str() << " ell=" << ell;
      }
    }
}

TEST(FailProb, VanishesForDyadicPhases) {
  for (int t = 3; t <= 6; ++t) {
    const Phase phi = Phase::dyadic(3, t);
    const MeasurementDistribution dist = output_distribution(diagonal_instance(t, 1, phi));
    EXPECT_NEAR(fail_prob(dist, phi, 1, FailProbMode::definition), 0.0, 1e-10);
    EXPECT_NEAR(fail_prob(dist, phi, 1, FailProbMode::sum), 0.0, 1e-10);
  }
}

TEST(FailProb, ModesAgreeOnGrid) {
  for (int t = 3; t <= 7; ++t)
    for (const Phase& phi : nondyadic_phases()) {
      const MeasurementDistribution dist = output_distribution(diagonal_instance(t, 1, phi));
      const std::int64_t e_max = static_cast<std::int64_t>(pow2(t - 1)) - 2;
      for (std::int64_t e = 1; e <= e_max; e += std::max<std::int64_t>(1, e_max / 4)) {
        const double by_def = fail_prob(dist, phi, e, FailProbMode::definition);
        const double by_sum = fail_prob(dist, phi, e, FailProbMode::sum);
        EXPECT_NEAR(by_def, by_sum, 1e-10) << "t=" << t << " phi=" << phi.str() << " e=" << e;
        EXPECT_GE(by_def, 0.0);
        EXPECT_LE(by_def, 1.0 + 1e-12);
      }
    }
}

TEST(FailProb, FrozenBenchmarkValue) {
  // t=5, phi=0.3, e=2, frozen from the independent DFT-sum oracle.
  const Phase phi = Phase::rational(3, 10);
  const MeasurementDistribution dist = output_distribution(diagonal_instance(5, 1, phi));
  EXPECT_NEAR(fail_prob(dist, phi, 2, FailProbMode::definition), 0.07504816111850317, 1e-11);
  EXPECT_LE(fail_prob(dist, phi, 2, FailProbMode::definition), failure_bounds(2).tight);
}

TEST(FailProb, RejectsOutOfDomainTolerance) {
  const Phase phi = Phase::rational(3, 10);
  const MeasurementDistribution dist = output_distribution(diagonal_instance(4, 1, phi));
  EXPECT_THROW(fail_prob(dist, phi, 0, FailProbMode::definition), std::domain_error);
  EXPECT_THROW(fail_prob(dist, phi, 7, FailProbMode::definition), std::domain_error);
}

TEST(SuccessProb, ComplementsFailure) {
  for (int t = 3; t <= 6; ++t)
    for (const Phase& phi : nondyadic_phases()) {
      const MeasurementDistribution dist = output_distribution(diagonal_instance(t, 1, phi));
      const std::int64_t e_max = static_cast<std::int64_t>(pow2(t - 1)) - 2;
      for (std::int64_t e = 1; e <= e_max; ++e) {
        const double success = success_prob(dist, phi, e);
        const double fail = fail_prob(dist, phi, e, FailProbMode::definition);
        EXPECT_NEAR(success + fail, 1.0, 1e-10);
      }
    }
}

TEST(SuccessProb, ExactPhaseAlwaysSucceeds) {
  const Phase phi = Phase::dyadic(5, 3);
  const MeasurementDistribution dist = output_distribution(diagonal_instance(3, 1, phi));
  EXPECT_NEAR(success_prob(dist, phi, 1), 1.0, 1e-10);
}

TEST(FailureBounds, KnownValues) {
  EXPECT_DOUBLE_EQ(failure_bounds(1).tight, 0.75);
  EXPECT_FALSE(failure_bounds(1).original.has_value());
  EXPECT_THROW(original_failure_bound(1), std::domain_error);

  const FailureBounds two = failure_bounds(2);
  EXPECT_DOUBLE_EQ(two.tight, 0.3125);
  ASSERT_TRUE(two.original.has_value());
  EXPECT_DOUBLE_EQ(*two.original, 0.5);

  EXPECT_DOUBLE_EQ(failure_bounds(4).tight, 0.140625);
}

TEST(FailureBounds, TightBeatsOriginalEverywhere) {
  for (std::int64_t e = 2; e <= 8192; ++e) {
    const FailureBounds b = failure_bounds(e);
    ASSERT_TRUE(b.original.has_value());
    EXPECT_LT(b.tight, *b.original) << "e=" << e;
  }
}

TEST(FailureBoundLemmaForm, SandwichedBetweenFailAndTight) {
  for (int t = 4; t <= 7; ++t)
    for (const Phase& phi : nondyadic_phases()) {
      const MeasurementDistribution dist = output_distribution(diagonal_instance(t, 1, phi));
      const PhaseGeometry g = PhaseGeometry::from(phi, t);
      const std::int64_t e_max = static_cast<std::int64_t>(pow2(t - 1)) - 2;
      for (std::int64_t e = 1; e <= e_max; e += std::max<std::int64_t>(1, e_max / 3)) {
        const double fail = fail_prob(dist, phi, e, FailProbMode::definition);
        const double lemma = failure_bound_lemma_form(t, g.delta_floor, e);
        EXPECT_LE(fail, lemma + 1e-12);
      }
    }
}

TEST(TRequired, KnownValues) {
  EXPECT_EQ(t_required(PrecisionSpec(3, 0.25)), 5);
  EXPECT_EQ(t_required(PrecisionSpec(1, 1.0)), 3);
  EXPECT_EQ(t_required(PrecisionSpec(4, 0.1)), 7);
  EXPECT_THROW(PrecisionSpec(0, 0.5), std::domain_error);
  EXPECT_THROW(PrecisionSpec(2, 0.0), std::domain_error);
  EXPECT_THROW(PrecisionSpec(2, 1.5), std::domain_error);
}

TEST(EValue, KnownValuesAndDomain) {
  EXPECT_EQ(e_value(5, 3), 3);
  EXPECT_EQ(e_value(3, 1), 3);
  EXPECT_THROW(e_value(3, 3), std::domain_error);
  EXPECT_THROW(e_value(2, 3), std::domain_error);
}

TEST(EValue, AtLeastTwoForRequiredWidths) {
  for (int n = 1; n <= 4; ++n)
    for (double eps : {1.0, 0.5, 0.25, 0.1}) {
      const int t = t_required(PrecisionSpec(n, eps));
      EXPECT_GE(e_value(t, n), 2) << "n=" << n << " eps=" << eps;
    }
}

TEST(PrecisionLemmas, BoundImpliesTarget) {
  // lemma 01: 1 - 1/(2e) - 1/(4e^2) > 1 - eps at t = t_required, e = 2^(t-n)-1
  for (int n = 1; n <= 4; ++n)
    for (double eps : {1.0, 0.5, 0.25, 0.1}) {
      const int t = t_required(PrecisionSpec(n, eps));
      const double e = static_cast<double>(e_value(t, n));
      const double lhs = 1.0 - 1.0 / (2.0 * e) - 1.0 / (4.0 * e * e);
      EXPECT_GT(lhs, 1.0 - eps - 1e-15) << "n=" << n << " eps=" << eps;
    }
}

TEST(PrecisionLemmas, ModDistanceImpliesPhaseDistance) {
  // lemma 02: |m - b_f|_mod 2^t <= 2^(t-n)-1 implies |m/2^t - phi|_mod 1 <= 2^-n,
  // exhaustively over outcomes.
  for (int n = 1; n <= 4; ++n)
    for (int t = n + 2; t <= std::min(10, n + 6); ++t)
      for (const Phase& phi : nondyadic_phases()) {
        const PhaseGeometry g = PhaseGeometry::from(phi, t);
        const std::int64_t dim = static_cast<std::int64_t>(pow2(t));
        const std::int64_t e = e_value(t, n);
        for (std::int64_t m = 0; m < dim; ++m) {
          if (mod_abs_int(m - g.best_floor, dim) > e) continue;
          const double phase_dist =
              mod_abs(static_cast<double>(m) / static_cast<double>(dim) - phi.value(), 1.0);
          EXPECT_LE(phase_dist, std::ldexp(1.0, -n) + 1e-15)
              << "n=" << n << " t=" << t << " phi=" << phi.str() << " m=" << m;
        }
      }
}

TEST(TrigBounds, EqualityAtFigureEndpoints) {
  // chord upper bound attains 2 at theta = pi; sine lower bound attains
  // equality at theta = pi/2, both exactly in double precision.
  EXPECT_EQ(std::abs(1.0 - unit_phase(kPi)), 2.0);
  EXPECT_EQ(std::sin(kPi / 2.0), 2.0 * (kPi / 2.0) / kPi);
}

TEST(TrigBounds, HoldOnDenseGrid) {
  std::vector<double> thetas;
  const int samples = 10000;
  thetas.reserve(samples + 2);
  for (int i = 0; i <= samples; ++i)
    thetas.push_back(kPi * static_cast<double>(i) / static_cast<double>(samples));
  const TrigBoundChecks checks = trig_bound_checks(thetas);
  EXPECT_TRUE(checks.chord_lower);
  EXPECT_TRUE(checks.chord_upper);
  EXPECT_TRUE(checks.sine_lower);
  EXPECT_TRUE(checks.sine_strict);
  EXPECT_TRUE(checks.all());
}

TEST(TrigBounds, RejectsOutOfDomainSample) {
  const std::vector<double> bad = {0.1, -0.2};
  EXPECT_THROW(trig_bound_checks(bad), std::domain_error);
  const std::vector<double> big = {3.5};
  EXPECT_THROW(trig_bound_checks(big), std::domain_error);
}

}  // namespace
}  // namespace qpecert
