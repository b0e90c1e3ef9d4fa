#include <gtest/gtest.h>

#include <entgeom/projective.hpp>

#include "support/oracles.hpp"

using namespace entgeom;

namespace {

SolverOptions fast() {
  SolverOptions o;
  o.restarts = 16;
  o.seed = 5;
  return o;
}

}  // namespace

TEST(ProjectiveNorm, BipartiteMatchesNuclearNorm) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const std::size_t m = 2 + seed % 5;
    const std::size_t n = m + seed % 3;
    const PureState xi = random_state(SpaceShape({m, n}), seed);
    const double nuclear = oracle::singular_values(matricize(xi, 1)).sum();
    const ProjectiveResult r = projective_norm(xi, fast());
    EXPECT_NEAR(r.bracket.lower, nuclear, 1e-10);
    EXPECT_NEAR(r.bracket.upper, nuclear, 1e-10);
  }
}

TEST(ProjectiveNorm, GenericMachineryAgreesWithBipartiteValue) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const PureState xi = random_state(SpaceShape({2, 3}), 40 + seed);
    const double nuclear = oracle::singular_values(matricize(xi, 1)).sum();
    const ProjectiveResult r = projective_norm_generic(xi.as_tensor(), fast());
    EXPECT_LE(r.bracket.lower, nuclear + 1e-9);
    EXPECT_GE(r.bracket.upper, nuclear - 1e-9);
    EXPECT_LT(r.bracket.width(), 1e-6);
  }
}

TEST(ProjectiveNorm, WStateMatchesExplicitDecomposition) {
  const ProjectiveResult r = projective_norm(PureState(SpaceShape({2, 2, 2}), oracle::w3()), fast());
  EXPECT_LE(r.bracket.lower, oracle::kWProjective + 1e-9);
  EXPECT_GE(r.bracket.upper, oracle::kWProjective - 1e-9);
  EXPECT_LT(r.bracket.width(), 1e-5);
}

TEST(ProjectiveNorm, Ghz) {
  const ProjectiveResult r = projective_norm(PureState(SpaceShape({2, 2, 2}), oracle::ghz3()), fast());
  EXPECT_NEAR(r.bracket.lower, std::sqrt(2.0), 1e-8);
  EXPECT_NEAR(r.bracket.upper, std::sqrt(2.0), 1e-8);
}

TEST(ProjectiveNorm, DecompositionCertifiesUpperEndpoint) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const PureState xi = random_state(SpaceShape({2, 2, 3}), 60 + seed);
    const ProjectiveResult r = projective_norm(xi, fast());
    const Tensor rec = r.decomposition.reconstruct(xi.shape().dims());
    EXPECT_NEAR((rec.data() - xi.amplitudes()).norm(), r.residual, 1e-12);
    EXPECT_GE(r.bracket.upper, r.decomposition.cost() - 1e-12);
    ASSERT_TRUE(r.dual.has_value());
    EXPECT_NEAR(std::abs(r.dual->data().dot(xi.amplitudes())) / r.dual_injective_upper, r.bracket.lower, 1e-9);
  }
}

TEST(ProjectiveNorm, DualityWithInjectiveNorm) {
  // 1 = <xi, xi> <= ||xi||_V ||xi||^V, and ||xi||^V <= cap * ||xi||.
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const PureState xi = random_state(SpaceShape({2, 2, 2}), 80 + seed);
    const NormBracket inj = injective_norm(xi, fast());
    const NormBracket proj = projective_norm(xi, fast()).bracket;
    EXPECT_GE(inj.upper * proj.upper, 1.0 - 1e-12);
    EXPECT_LE(proj.lower, projective_cap_factor(xi.shape().dims()) + 1e-12);
    EXPECT_GE(proj.lower, 1.0 - 1e-12);
  }
}

TEST(ProjectiveNorm, InitialDecompositionsReconstruct) {
  const Tensor t({2, 3, 2}, random_gaussian_vector(12, 7));
  for (std::size_t slot = 0; slot < 3; ++slot) {
    EXPECT_LT((slice_decomposition(t, slot).reconstruct(t.dims()).data() - t.data()).norm(), 1e-12);
  }
  const auto tree = schmidt_tree_decomposition(t, 0);
  ASSERT_TRUE(tree.has_value());
  EXPECT_LT((tree->reconstruct(t.dims()).data() - t.data()).norm(), 1e-12);
  EXPECT_NEAR(projective_cap_factor({2, 3, 2}), 2.0, 1e-15);
}

TEST(Decomposability, ProductVersusEntangled) {
  const SpaceShape s({2, 3});
  const DecomposabilityResult p = is_decomposable(expand_product(random_product(s, 1), s), fast(), 1e-9);
  EXPECT_TRUE(p.decomposable);
  EXPECT_TRUE(p.certificate.has_value());
  EXPECT_FALSE(is_decomposable(PureState(SpaceShape({2, 2}), oracle::bell()), fast(), 1e-9).decomposable);
}

TEST(HullMembership, ScaledVectors) {
  const SpaceShape s({2, 2, 2});
  const CVector w = oracle::w3();
  EXPECT_EQ(hull_membership(s, 0.6 * w, fast()).verdict, HullVerdict::inside);
  EXPECT_EQ(hull_membership(s, 0.7 * w, fast()).verdict, HullVerdict::outside);
  const CVector p = random_product(s, 3).expand().data();
  EXPECT_EQ(hull_membership(s, 0.999 * p, fast()).verdict, HullVerdict::inside);
  EXPECT_EQ(hull_membership(s, 1.001 * p, fast()).verdict, HullVerdict::outside);
}
