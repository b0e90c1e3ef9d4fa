#include <gtest/gtest.h>

#include <entgeom/entanglement.hpp>

#include "support/oracles.hpp"

using namespace entgeom;

namespace {

SolverOptions fast() {
  SolverOptions o;
  o.restarts = 8;
  o.seed = 2;
  return o;
}

const SpaceShape kQubits({2, 2});

}  // namespace

TEST(Entanglement, BellProjectorReachesTwo) {
  const CVector b = oracle::bell();
  const EntanglementResult r = entanglement(DensityOperator(kQubits, b * b.adjoint()), fast());
  EXPECT_NEAR(r.bracket.lower, 2.0, 1e-9);
  EXPECT_NEAR(r.bracket.upper, 2.0, 1e-9);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_NEAR(r.witness->value, 2.0, 1e-9);
  EXPECT_NEAR(pure_state_entanglement(PureState(kQubits, b), fast()).upper, 2.0, 1e-9);
}

TEST(Entanglement, ProductStateIsOne) {
  const DensityOperator rho = DensityOperator::from_pure(expand_product(random_product(kQubits, 4), kQubits));
  const EntanglementResult r = entanglement(rho, fast());
  EXPECT_NEAR(r.bracket.lower, 1.0, 1e-12);
  EXPECT_NEAR(r.bracket.upper, 1.0, 1e-9);
}

TEST(Entanglement, WernerFamily) {
  // E = max(1, (1 + 3p) / 2): the witness |B><B| gives the lower end.
  for (double p : {0.1, 0.3, 0.5, 0.8}) {
    const EntanglementResult r = entanglement(DensityOperator(kQubits, oracle::werner(p)), fast());
    const double expected = std::max(1.0, 0.5 * (1.0 + 3.0 * p));
    EXPECT_NEAR(r.bracket.lower, expected, 1e-6) << p;
    EXPECT_NEAR(r.bracket.upper, expected, 1e-6) << p;
  }
}

TEST(Entanglement, BracketsStayInTheAPrioriRange) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const DensityOperator rho = random_density(kQubits, 300 + seed, 1 + seed % 4);
    const EntanglementResult r = entanglement(rho, fast());
    EXPECT_GE(r.bracket.lower, 1.0);
    EXPECT_LE(r.bracket.lower, r.bracket.upper);
    EXPECT_LE(r.bracket.upper, 2.0 + 1e-12);
    if (r.witness) EXPECT_LE(r.witness->value, r.bracket.upper + 1e-12);
  }
}

TEST(Entanglement, PureStatesMatchSquaredProjectiveNorm) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const PureState xi = random_state(kQubits, 500 + seed);
    const double nuclear = oracle::singular_values(matricize(xi, 1)).sum();
    const EntanglementResult r = entanglement(DensityOperator::from_pure(xi), fast());
    EXPECT_NEAR(r.bracket.lower, nuclear * nuclear, 1e-6);
    EXPECT_NEAR(r.bracket.upper, nuclear * nuclear, 1e-6);
  }
}

TEST(Classify, WernerVerdictsAgreeWithPartialTranspose) {
  for (double p : {0.0, 0.2, 0.3, 0.4, 0.6, 1.0}) {
    const CMatrix m = oracle::werner(p);
    const Classification c = classify(DensityOperator(kQubits, m), fast());
    const bool ppt = oracle::ppt_min_eigenvalue(m, 2, 2) >= -1e-12;
    if (p == 1.0) {
      EXPECT_EQ(c.verdict, StateVerdict::maximally_entangled);
    } else if (ppt) {
      EXPECT_EQ(c.verdict, StateVerdict::separable) << p;
      ASSERT_TRUE(c.separable.has_value());
      EXPECT_LE(c.separable->residual, 1e-6);
    } else {
      EXPECT_EQ(c.verdict, StateVerdict::entangled) << p;
      ASSERT_TRUE(c.witness.has_value());
      EXPECT_GT(c.witness->value, 1.0);
    }
  }
}

TEST(Classify, SeparableDecompositionReconstructs) {
  const SpaceShape s({2, 3});
  const std::vector<PureState> parts{expand_product(random_product(s, 1), s), expand_product(random_product(s, 2), s),
                                     expand_product(random_product(s, 3), s)};
  const std::vector<double> w{0.2, 0.3, 0.5};
  const DensityOperator rho = DensityOperator::mixture(w, parts);
  const SeparableDecomposition d = find_separable_decomposition(rho, fast());
  EXPECT_LT(d.residual, 1e-6);
  EXPECT_LT((d.reconstruct(6) * d.raw_weight - rho.matrix()).norm(), 1e-6);
  for (double x : d.weights) EXPECT_GT(x, 0.0);
}

TEST(Lipschitz, HoldsOnSampledPairs) {
  std::vector<DensityOperator> states;
  std::vector<NormBracket> brackets;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    states.push_back(random_density(kQubits, 700 + seed, 1 + seed % 2));
    brackets.push_back(entanglement(states.back(), fast()).bracket);
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      const LipschitzReport r = lipschitz_check(states[i], brackets[i], states[j], brackets[j]);
      EXPECT_FALSE(r.violated);
      EXPECT_EQ(r.constant, 2.0);
      EXPECT_LE(r.midpoint_gap, r.constant * r.trace_distance + 1e-6);
    }
  }
}

TEST(Lipschitz, BellAgainstMaximallyMixed) {
  const CVector b = oracle::bell();
  const DensityOperator bell(kQubits, b * b.adjoint());
  const DensityOperator mixed(kQubits, CMatrix::Identity(4, 4) / 4.0);
  const LipschitzReport r = lipschitz_check(bell, mixed, fast());
  EXPECT_NEAR(r.trace_distance, oracle::kBellMinusMixedTraceNorm, 1e-12);
  EXPECT_NEAR(r.midpoint_gap, 1.0, 1e-6);
  EXPECT_FALSE(r.violated);
}

TEST(Mixture, MaximalComponentsAreNecessary) {
  const CVector b = oracle::bell();
  CVector b2 = CVector::Zero(4);
  b2(1) = 1.0 / std::sqrt(2.0);
  b2(2) = -1.0 / std::sqrt(2.0);
  const std::vector<PureState> maximal{PureState(kQubits, b), PureState(kQubits, b2)};
  const MixtureReport same = mixture_component_check({1.0, 0.0}, maximal, fast());
  EXPECT_TRUE(same.reaches_maximal);
  EXPECT_TRUE(same.consistent);
  EXPECT_EQ(same.verdict, "maximally entangled certified");

  const std::vector<PureState> mixed{PureState(kQubits, b), random_state(kQubits, 5)};
  const MixtureReport r = mixture_component_check({0.5, 0.5}, mixed, fast());
  EXPECT_FALSE(r.reaches_maximal);
  EXPECT_TRUE(r.excluded);
  EXPECT_TRUE(r.consistent);
  EXPECT_EQ(r.verdict, "not maximally entangled certified");
  EXPECT_EQ(r.components[0], MaximalityVerdict::maximal);
  EXPECT_EQ(r.components[1], MaximalityVerdict::not_maximal);
}
