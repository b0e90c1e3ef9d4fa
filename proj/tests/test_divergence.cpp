#include <gtest/gtest.h>

#include <entgeom/divergence.hpp>
#include <entgeom/projective.hpp>

using namespace entgeom;

TEST(Divergence, SingleBlock) {
  const DivergentState d = build_divergent(1);
  EXPECT_EQ(d.side, 4u);
  ASSERT_EQ(d.rows.size(), 1u);
  EXPECT_NEAR(d.rows[0].block_bound, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(d.nuclear_norm, std::sqrt(2.0), 1e-15);
}

TEST(Divergence, ThreeBlocksClosedForm) {
  const DivergentState d = build_divergent(3);
  EXPECT_EQ(d.side, 4u + 16u + 64u);
  EXPECT_NEAR(d.nuclear_norm, 2.0 + 3.0 * std::sqrt(2.0), 1e-12);
  for (std::size_t k = 1; k < d.rows.size(); ++k) EXPECT_GT(d.rows[k].block_bound, d.rows[k - 1].block_bound);
  for (const auto& r : d.rows) {
    EXPECT_NEAR(r.block_bound, std::pow(2.0, 0.5 * r.k), 1e-12);
    EXPECT_NEAR(r.block_injective.lower, 1.0, 1e-8);
    EXPECT_NEAR(r.block_injective.upper, 1.0, 1e-8);
  }
}

TEST(Divergence, DenseStateMatchesSchmidtData) {
  const DivergentState d = build_divergent(2);
  ASSERT_TRUE(d.state.has_value());
  EXPECT_NEAR(d.state->amplitudes().norm(), 1.0, 1e-14);
  EXPECT_NEAR(d.schmidt.norm(), 1.0, 1e-14);
  const ProjectiveResult p = projective_norm(*d.state);
  EXPECT_NEAR(p.bracket.upper, d.normalized_nuclear_norm(), 1e-10);
}

TEST(Divergence, GrowsWithoutBound) {
  double previous = 0.0;
  for (int k = 1; k <= 4; ++k) {
    const double value = build_divergent(k).normalized_nuclear_norm();
    if (k > 1) EXPECT_GT(value, previous + 0.5);
    previous = value;
  }
}

TEST(Divergence, RejectsBadArguments) {
  EXPECT_THROW(build_divergent(0), PreconditionError);
  EXPECT_THROW(build_divergent(2, 1.5), PreconditionError);
  EXPECT_THROW(build_divergent(2, 0.5, 1), PreconditionError);
  EXPECT_THROW(build_divergent(6), ShapeError);
}
