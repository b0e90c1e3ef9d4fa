#include <gtest/gtest.h>

#include <entgeom/injective.hpp>
#include <entgeom/sphere_cover.hpp>

#include "support/oracles.hpp"

using namespace entgeom;

namespace {

SolverOptions fast() {
  SolverOptions o;
  o.restarts = 16;
  o.seed = 3;
  return o;
}

}  // namespace

TEST(InjectiveNorm, BipartiteMatchesLargestSingularValue) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const std::size_t m = 2 + seed % 4;
    const std::size_t n = m + seed % 3;
    const PureState xi = random_state(SpaceShape({m, n}), seed);
    const double sigma = oracle::singular_values(matricize(xi, 1)).maxCoeff();
    const NormBracket b = injective_norm(xi, fast());
    EXPECT_NEAR(b.lower, sigma, 1e-10);
    EXPECT_NEAR(b.upper, sigma, 1e-10);
  }
}

TEST(InjectiveNorm, NearProductState) {
  CVector v = CVector::Zero(4);
  v(0) = 1.0;
  v(3) = 0.01;
  const PureState xi = PureState::normalized(SpaceShape({2, 2}), v);
  const NormBracket b = injective_norm(xi, fast());
  EXPECT_NEAR(b.lower, oracle::kNearProductSigmaMax, 1e-12);
  EXPECT_NEAR(b.upper, oracle::kNearProductSigmaMax, 1e-12);
}

TEST(InjectiveNorm, Ghz) {
  const NormBracket b = injective_norm(PureState(SpaceShape({2, 2, 2}), oracle::ghz3()), fast());
  EXPECT_NEAR(b.lower, oracle::kGhzInjective, 1e-8);
  EXPECT_NEAR(b.upper, oracle::kGhzInjective, 1e-8);
}

TEST(InjectiveNorm, WStateTightenedBySphereCover) {
  const NormBracket b = injective_norm(PureState(SpaceShape({2, 2, 2}), oracle::w3()), fast());
  EXPECT_LE(b.lower, oracle::kWInjective + 1e-9);
  EXPECT_NEAR(b.lower, 2.0 / 3.0, 1e-8);
  EXPECT_GE(b.upper, 2.0 / 3.0);
  EXPECT_LE(b.upper, 2.0 / 3.0 + 1e-5);
}

TEST(InjectiveNorm, ProductStatesHaveNormOne) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SpaceShape s({2, 3, 2});
    const PureState p = expand_product(random_product(s, seed), s);
    const NormBracket b = injective_norm(p, fast());
    EXPECT_NEAR(b.lower, 1.0, 1e-10);
    EXPECT_NEAR(b.upper, 1.0, 1e-10);
    EXPECT_NEAR(distance_to_V(p, fast()).upper, 0.0, 1e-5);
  }
}

TEST(InjectiveNorm, BracketIsOrderedAndCertified) {
  // lower is attained by the certificate; upper never undercuts it.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PureState xi = random_state(SpaceShape({2, 2, 3}), 100 + seed);
    const NormBracket b = injective_norm(xi, fast());
    ASSERT_TRUE(b.lower_certificate.has_value());
    EXPECT_NEAR(std::abs(b.lower_certificate->overlap(xi.as_tensor())), b.lower, 1e-12);
    EXPECT_LE(b.lower, b.upper);
    EXPECT_LE(b.upper, bipartition_upper_bound(xi.as_tensor()).value + 1e-15);
    EXPECT_GE(b.lower, 1.0 / std::sqrt(12.0));
  }
}

TEST(InjectiveNorm, DeterministicForFixedSeed) {
  const PureState xi = random_state(SpaceShape({3, 3, 2}), 8);
  const NormBracket a = injective_norm(xi, fast());
  const NormBracket b = injective_norm(xi, fast());
  EXPECT_EQ(a.lower, b.lower);
  EXPECT_EQ(a.upper, b.upper);
}

TEST(InjectiveNorm, ScalesLinearly) {
  const Tensor t({2, 2, 2}, random_gaussian_vector(8, 2));
  const Tensor t3({2, 2, 2}, 3.0 * t.data());
  const NormBracket a = injective_norm(t, fast());
  const NormBracket b = injective_norm(t3, fast());
  EXPECT_NEAR(b.lower, 3.0 * a.lower, 1e-9);
}

TEST(InjectiveNorm, RejectsZeroTensor) { EXPECT_THROW(injective_norm(Tensor::zeros({2, 2}), fast()), Error); }

TEST(InjectiveNorm, DistanceFormula) {
  const PureState xi = random_state(SpaceShape({2, 4}), 12);
  const NormBracket inj = injective_norm(xi, fast());
  const NormBracket d = distance_to_V(xi, fast());
  EXPECT_NEAR(d.lower, std::sqrt(2.0 - 2.0 * inj.upper), 1e-12);
  EXPECT_NEAR(d.upper, std::sqrt(2.0 - 2.0 * inj.lower), 1e-12);
}

TEST(OperatorInjectiveNorm, BellReflection) {
  const CVector b = oracle::bell();
  const CMatrix x = 2.0 * b * b.adjoint() - CMatrix::Identity(4, 4);
  const OperatorNormBracket r = operator_injective_norm(x, SpaceShape({2, 2}), fast());
  EXPECT_NEAR(r.bracket.lower, oracle::kBellReflectionVNorm, 1e-6);
  EXPECT_GE(r.bracket.upper, oracle::kBellReflectionVNorm - 1e-12);
}

TEST(SphereCover, BoundsWStateFromAbove) {
  const Tensor w({2, 2, 2}, oracle::w3());
  const auto r = sphere_cover_bound(w, 0, 2.0 / 3.0 - 1e-9, 200000, 1e-7);
  ASSERT_TRUE(r.has_value());
  EXPECT_GE(r->upper, 2.0 / 3.0 - 1e-12);
  EXPECT_LE(r->upper, 2.0 / 3.0 + 1e-6);
  EXPECT_GE(r->best_value, 2.0 / 3.0 - 1e-9);
}

TEST(SphereCover, DeclinesWithoutQubitSlot) {
  const Tensor t({3, 3, 3}, random_gaussian_vector(27, 1));
  EXPECT_FALSE(sphere_cover_bound(t, 0, 0.0, 1000, 1e-6).has_value());
}
