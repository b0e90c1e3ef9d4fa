#include <gtest/gtest.h>

#include <entgeom/linalg.hpp>
#include <entgeom/maximal.hpp>

using namespace entgeom;

namespace {

SolverOptions fast() {
  SolverOptions o;
  o.restarts = 16;
  o.seed = 9;
  return o;
}

}  // namespace

class MaximalShapes : public ::testing::TestWithParam<std::vector<std::size_t>> {};

TEST_P(MaximalShapes, ExtremalOnAllThreeCounts) {
  const SpaceShape shape(GetParam());
  const double r = *closed_form_inner_radius(shape);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const PureState xi = make_maximal(shape, seed);
    const MaximalityReport rep = is_maximal(xi, fast());
    EXPECT_EQ(rep.verdict, MaximalityVerdict::maximal);
    ASSERT_TRUE(rep.evidence.has_value());
    EXPECT_NEAR(rep.evidence->injective.upper, r, 1e-8);
    EXPECT_NEAR(rep.evidence->projective.lower, 1.0 / r, 1e-6);
    EXPECT_NEAR(rep.evidence->distance.lower, std::sqrt(2.0 * (1.0 - r)), 1e-6);
    EXPECT_TRUE(purification_check(xi).purifies);
    EXPECT_LE(purification_check(xi).deviation, 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Shapes, MaximalShapes,
                         ::testing::Values(std::vector<std::size_t>{2, 2}, std::vector<std::size_t>{2, 5},
                                           std::vector<std::size_t>{2, 2, 4}, std::vector<std::size_t>{2, 3, 7}));

TEST(Maximal, CanonicalFormIsStandardBasisSum) {
  const MaximalForm f = canonical_maximal_form(SpaceShape({2, 3}));
  f.validate();
  const CVector v = f.state().amplitudes();
  EXPECT_NEAR(std::abs(v(0)), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(v(4)), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(v.norm(), 1.0, 1e-15);
}

TEST(Maximal, UnsupportedShapeNamesTheCondition) {
  try {
    make_maximal(SpaceShape({4, 2}), 0);
    FAIL() << "expected UnsupportedShapeError";
  } catch (const UnsupportedShapeError& e) {
    EXPECT_NE(std::string(e.what()).find("n_N"), std::string::npos);
  }
  EXPECT_FALSE(closed_form_inner_radius(SpaceShape({2, 2, 2})).has_value());
  // sorted order decides the closed form
  EXPECT_NEAR(*closed_form_inner_radius(SpaceShape({6, 2, 3})), 1.0 / std::sqrt(6.0), 1e-15);
}

TEST(Maximal, RandomVectorsAreNotMaximal) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const PureState xi = random_state(SpaceShape({2, 2, 4}), 200 + seed);
    const MaximalityReport rep = is_maximal(xi, fast());
    EXPECT_EQ(rep.verdict, MaximalityVerdict::not_maximal);
    EXPECT_TRUE(rep.evidence->injective_excluded(1e-6));
    EXPECT_FALSE(purification_check(xi).purifies);
  }
  EXPECT_EQ(is_maximal(random_state(SpaceShape({2, 2, 2}), 1), fast()).verdict,
            MaximalityVerdict::unknown_inner_radius);
}

TEST(Maximal, ConnectingUnitaryMapsOneOntoTheOther) {
  const SpaceShape shape({2, 3, 6});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const PureState a = make_maximal(shape, 2 * seed);
    const PureState b = make_maximal(shape, 2 * seed + 1);
    const CMatrix u = connect_maximal(a, b);
    EXPECT_LT((u.adjoint() * u - CMatrix::Identity(6, 6)).norm(), 1e-12);
    EXPECT_LT((apply_local(shape, a.amplitudes(), 2, u) - b.amplitudes()).norm(), 1e-12);
  }
  EXPECT_THROW(connect_maximal(make_maximal(shape, 0), random_state(shape, 3)), PreconditionError);
}

TEST(Maximal, RefinementKeepsVerdicts) {
  const SpaceShape shape({2, 2, 4});
  EXPECT_TRUE(refinement_agreement(make_maximal(shape, 4), fast()).agree());
  const RefinementReport r = refinement_agreement(random_state(shape, 4), fast());
  EXPECT_TRUE(r.agree());
  EXPECT_EQ(r.coarse.verdict, MaximalityVerdict::not_maximal);
}

TEST(Maximal, LocalUnitaryInvariance) {
  const SpaceShape shape({2, 2, 4});
  CVector v = make_maximal(shape, 1).amplitudes();
  for (std::size_t k = 0; k < 3; ++k) v = apply_local(shape, v, k, random_unitary(shape.dim(k), 30 + k));
  EXPECT_EQ(is_maximal(PureState::normalized(shape, v), fast()).verdict, MaximalityVerdict::maximal);
}
