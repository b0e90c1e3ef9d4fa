#include <gtest/gtest.h>

#include <entgeom/inner_radius.hpp>
#include <entgeom/maximal.hpp>

using namespace entgeom;

namespace {

SolverOptions fast() {
  SolverOptions o;
  o.restarts = 8;
  o.seed = 1;
  return o;
}

}  // namespace

TEST(InnerRadius, ClosedFormIsExact) {
  const InnerRadiusResult r = inner_radius(SpaceShape({2, 3, 6}));
  EXPECT_EQ(r.mode, RadiusMode::closed_form);
  EXPECT_EQ(r.bracket.lower, 1.0 / std::sqrt(6.0));
  EXPECT_EQ(r.bracket.upper, 1.0 / std::sqrt(6.0));
  ASSERT_TRUE(r.minimizer.has_value());
  EXPECT_TRUE(purification_check(*r.minimizer).purifies);
}

TEST(InnerRadius, ThreeQubitSearchReachesW) {
  const InnerRadiusResult r = inner_radius(SpaceShape({2, 2, 2}), fast());
  EXPECT_EQ(r.mode, RadiusMode::search);
  EXPECT_EQ(r.bracket.lower, 0.5);
  EXPECT_TRUE(r.strict_lower);
  EXPECT_LE(r.bracket.upper, 2.0 / 3.0 + 1e-5);
  EXPECT_GE(r.bracket.upper, 0.5);
}

TEST(InnerRadius, ForcedSearchOnClosedFormShapeBracketsTheValue) {
  const InnerRadiusResult r = inner_radius(SpaceShape({2, 4}), fast(), true);
  EXPECT_EQ(r.mode, RadiusMode::search);
  EXPECT_LE(r.bracket.lower, 1.0 / std::sqrt(2.0) + 1e-12);
  EXPECT_NEAR(r.bracket.upper, 1.0 / std::sqrt(2.0), 1e-8);
}

TEST(InnerRadius, SupDistanceSwapsEndpoints) {
  const NormBracket d = sup_distance(SpaceShape({2, 2, 2}), fast());
  const InnerRadiusResult r = inner_radius(SpaceShape({2, 2, 2}), fast());
  EXPECT_NEAR(d.lower, std::sqrt(2.0 * (1.0 - r.bracket.upper)), 1e-12);
  EXPECT_NEAR(d.upper, std::sqrt(2.0 * (1.0 - r.bracket.lower)), 1e-12);
}

TEST(InnerRadius, DescentDoesNotIncreaseTheNorm) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const PureState start = random_state(SpaceShape({2, 2, 2}), seed);
    const PureState end = descend_injective(start, fast());
    EXPECT_LE(injective_norm(end, fast()).lower, injective_norm(start, fast()).lower + 1e-9);
  }
}

TEST(VBall, SupremumAttainedAtMinimizer) {
  for (const auto& dims : {std::vector<std::size_t>{2, 2}, std::vector<std::size_t>{2, 3, 6}}) {
    const VBallReport r = vball_sup_check(SpaceShape(dims), fast());
    EXPECT_TRUE(r.achieved);
    EXPECT_NEAR(r.best_ratio, r.target, 1e-6);
    for (const auto& s : r.samples) EXPECT_LE(s.ratio, r.target + 1e-6) << s.label;
  }
  EXPECT_THROW(vball_sup_check(SpaceShape({2, 2, 2}), fast()), UnsupportedShapeError);
}
