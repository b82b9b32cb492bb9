#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <variant>

#include "expect_code.hpp"
#include "subwit/measures.hpp"
#include "subwit/witness.hpp"
#include "support.hpp"

using namespace subwit;
using subwit::testkit::code_of;

namespace {

constexpr double kPi = std::numbers::pi;

DensityMatrix ghz3_noisy(double p) {
  const DensityMatrix g = DensityMatrix::from_pure(target_state(ghz_spec(3), PhaseSetting::zeros(3)));
  return DensityMatrix::from_matrix(p * g.matrix() + (1.0 - p) * DensityMatrix::maximally_mixed(3).matrix());
}

}  // namespace

TEST(MeasuresConcurrence, Examples) {
  EXPECT_NEAR(concurrence(DensityMatrix::from_pure(bell({BellBranch::Phi, 0.0}))).value, 1.0, 1e-10);
  EXPECT_NEAR(concurrence(DensityMatrix::maximally_mixed(2)).value, 0.0, 1e-12);
  EXPECT_EQ(code_of([] { concurrence(DensityMatrix::maximally_mixed(3)); }), ErrorCode::DimensionMismatch);
}

TEST(MeasuresConcurrence, RhoPhiRegression) {
  // Pure at eps = 1; for these points C2 = eps (|rho_03| = eps/2, no
  // population outside the Bell subspace).
  EXPECT_NEAR(concurrence(rho_phi(0.2, kPi / 2, kPi / 2)).value, 0.2, 1e-9);
  EXPECT_NEAR(concurrence(rho_phi(0.5, kPi / 2, kPi / 2)).value, 0.5, 1e-9);
  EXPECT_NEAR(concurrence(rho_phi(1.0, kPi / 2, kPi / 2)).value, 1.0, 1e-7);
}

TEST(MeasuresConcurrence, LambdaInvariant) {
  testkit::Rng rng(61);
  for (int i = 0; i < 50; ++i) {
    const ConcurrenceReport c = concurrence(testkit::random_density(2, rng));
    const auto& l = c.lambdas;
    EXPECT_NEAR(c.value, std::max(0.0, l[0] - l[1] - l[2] - l[3]), 1e-10);
    EXPECT_TRUE(l[0] >= l[1] && l[1] >= l[2] && l[2] >= l[3] && l[3] >= 0.0);
  }
}

TEST(MeasuresConcurrence, LocalUnitaryInvariance) {
  testkit::Rng rng(62);
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix r = testkit::random_density(2, rng, 1 + i % 4);
    const ComplexMatrix u = testkit::random_local_unitary(2, rng);
    const DensityMatrix ru = DensityMatrix::from_matrix(u * r.matrix() * u.adjoint());
    EXPECT_NEAR(concurrence(ru).value, concurrence(r).value, 1e-8);
  }
}

TEST(MeasuresBound, FromWitness) {
  EXPECT_NEAR(bound_from_witness(-0.1827), 0.3654, 1e-12);
  EXPECT_NEAR(bound_from_witness(-0.0742), 0.1484, 1e-12);
  EXPECT_EQ(bound_from_witness(0.0), 0.0);
  EXPECT_EQ(bound_from_witness(0.3), 0.0);
}

TEST(MeasuresBound, OracleDominance) {
  testkit::Rng rng(63);
  for (int i = 0; i < 2000; ++i) {
    const DensityMatrix r = testkit::random_density(2, rng, 1 + i % 4);
    const double c = concurrence(r).value;
    const double bs = bound_from_witness(subspace_witness(r, bell_spec(), 0.5, WitnessMode::SubspaceConstrained).value);
    const double bp = bound_from_witness(state_witness(r, bell_spec(), PhaseSetting::zeros(2), 0.5).value);
    EXPECT_GE(c, bs - 1e-8);
    EXPECT_GE(bs, bp - 1e-12);
  }
}

TEST(MeasuresAppendixB, ConcurrenceExamples) {
  const auto zero = appendix_b_concurrence({0.0, 0.7, 1.1});
  ASSERT_TRUE(std::holds_alternative<double>(zero));
  EXPECT_NEAR(std::get<double>(zero), 0.0, 1e-15);
  const auto special = appendix_b_concurrence({0.6, 0.0, kPi / 2});
  ASSERT_TRUE(std::holds_alternative<double>(special));
  EXPECT_NEAR(std::get<double>(special), 0.0, 1e-15);
  const auto neg = appendix_b_concurrence({1.0, kPi / 2, kPi / 2});
  ASSERT_TRUE(std::holds_alternative<RadicandNegative>(neg));
  EXPECT_NEAR(std::get<RadicandNegative>(neg).a, 0.25, 1e-15);
  EXPECT_NEAR(std::get<RadicandNegative>(neg).b, 1.0, 1e-15);
  EXPECT_EQ(code_of([] { appendix_b_concurrence({-0.1, 0.0, 0.0}); }), ErrorCode::OutOfRange);
}

TEST(MeasuresAppendixB, SignCriterionExamples) {
  EXPECT_FALSE(sign_criterion({0.0, 0.3, 0.3}));
  EXPECT_FALSE(sign_criterion({0.5, 0.0, kPi / 2}));
  EXPECT_TRUE(sign_criterion({0.5, kPi / 4, kPi / 4}));
  EXPECT_GT(concurrence(rho_phi(0.5, kPi / 4, kPi / 4)).value, 0.0);
}

TEST(MeasuresAppendixB, WitnessesMatchModuleOnGrid) {
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      for (int k = 0; k < 8; ++k) {
        const AppendixBParams p{i / 7.0, 2 * kPi * j / 8, kPi * k / 7};
        const DensityMatrix r = rho_phi(p.eps, p.theta, p.phi0);
        EXPECT_NEAR(appendix_b_state_witness(p), state_witness(r, bell_spec(), PhaseSetting::zeros(2), 0.5).value,
                    1e-12);
        const double ws = subspace_witness(r, bell_spec(), 0.5, WitnessMode::SubspaceConstrained).value;
        EXPECT_NEAR(appendix_b_subspace_witness(p), ws, 1e-12);
        EXPECT_NEAR(-ws, std::abs(r(0, 3)), 1e-12);
        EXPECT_EQ(sign_criterion(p), concurrence(r).value > 1e-10);
      }
    }
  }
}

TEST(MeasuresGme, Ghz3Bound) {
  EXPECT_NEAR(gme_bound_ghz3(ghz3_noisy(1.0)), 0.5, 1e-15);
  EXPECT_NEAR(gme_bound_ghz3(DensityMatrix::maximally_mixed(3)), -3.0 / 8.0, 1e-15);
  for (double p : {0.2, 3.0 / 7.0, 0.8}) {
    EXPECT_NEAR(gme_bound_ghz3(ghz3_noisy(p)), p / 2 - 3 * (1 - p) / 8, 1e-15);
  }
  EXPECT_EQ(code_of([] { gme_bound_ghz3(DensityMatrix::maximally_mixed(2)); }), ErrorCode::DimensionMismatch);
}
