#include <gtest/gtest.h>

#include <array>

#include <entgeom/linalg.hpp>
#include <entgeom/tensor.hpp>

#include "support/oracles.hpp"

using namespace entgeom;

TEST(SpaceShape, RejectsDegenerateShapes) {
  EXPECT_THROW(SpaceShape({4}), InvariantError);
  EXPECT_THROW(SpaceShape({2, 0}), InvariantError);
  EXPECT_THROW(SpaceShape({1024, 1025}), InvariantError);
  const SpaceShape s({2, 3, 6});
  EXPECT_EQ(s.total_dim(), 36u);
  EXPECT_EQ(s.leading_dim(), 6u);
  EXPECT_TRUE(s.admits_maximal_form());
  EXPECT_FALSE(SpaceShape({3, 2}).admits_maximal_form());
  EXPECT_EQ(SpaceShape({6, 2, 3}).sorted(), SpaceShape({2, 3, 6}));
}

TEST(SpaceShape, FlatteningPutsSlotOneSlowest) {
  const SpaceShape s({2, 3, 4});
  const std::array<std::size_t, 3> idx{1, 2, 3};
  EXPECT_EQ(flatten_index(s, idx), 1u * 12 + 2u * 4 + 3u);
  for (std::size_t f = 0; f < s.total_dim(); ++f) EXPECT_EQ(flatten_index(s, unflatten_index(s, f)), f);
  const std::array<std::size_t, 3> bad{2, 0, 0};
  EXPECT_THROW(flatten_index(s, bad), BoundsError);
}

TEST(Tensor, MatricizeRoundTripsAndPermutes) {
  const Tensor t({2, 3, 4}, random_gaussian_vector(24, 11));
  const std::array<std::size_t, 2> rows{2, 0};
  const CMatrix m = t.matricize(rows);
  EXPECT_EQ(m.rows(), 8);
  EXPECT_EQ(m.cols(), 3);
  EXPECT_EQ((Tensor::from_matrix(t.dims(), rows, m).data() - t.data()).norm(), 0.0);
  const std::array<std::size_t, 3> order{2, 0, 1};
  const Tensor p = t.permuted(order);
  EXPECT_EQ(p.dims(), (std::vector<std::size_t>{4, 2, 3}));
  // entry (a, b, c) of t sits at (c, a, b) of p
  EXPECT_EQ(p.data()(3 * 6 + 1 * 3 + 2), t.data()(1 * 12 + 2 * 4 + 3));
}

TEST(Tensor, ContractExceptGivesOverlap) {
  const Tensor t({2, 3, 2}, random_gaussian_vector(12, 5));
  const ProductVector p = random_product(std::vector<std::size_t>{2, 3, 2}, 6);
  for (std::size_t free = 0; free < 3; ++free) {
    const CVector r = t.contract_except(p.factors(), free);
    EXPECT_NEAR(std::abs(p.factor(free).dot(r) - p.overlap(t)), 0.0, 1e-13);
  }
}

TEST(PureState, EnforcesUnitNorm) {
  const SpaceShape s({2, 2});
  CVector v = oracle::bell();
  EXPECT_NO_THROW(PureState(s, v));
  EXPECT_NO_THROW(PureState(s, v * (1.0 + 5e-10)));
  EXPECT_THROW(PureState(s, v * (1.0 + 1e-7)), InvariantError);
  EXPECT_NO_THROW(PureState(s, v * (1.0 + 5e-9), kLoadTolerance));
  EXPECT_THROW(PureState(s, CVector::Zero(3)), ShapeError);
  EXPECT_THROW(PureState::normalized(s, CVector::Zero(4)), InvariantError);
}

TEST(DensityOperator, EnforcesInvariants) {
  const SpaceShape s({2, 2});
  EXPECT_NO_THROW(DensityOperator(s, oracle::werner(0.5)));
  CMatrix m = oracle::werner(0.5);
  m(0, 1) = 0.1;
  EXPECT_THROW(DensityOperator(s, m), InvariantError);
  EXPECT_THROW(DensityOperator(s, 2.0 * oracle::werner(0.5)), InvariantError);
  CMatrix neg = CMatrix::Zero(4, 4);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_THROW(DensityOperator(s, neg), InvariantError);
}

TEST(DensityOperator, MixtureAndPartialTrace) {
  const SpaceShape s({2, 3});
  const std::vector<PureState> parts{expand_product(random_product(s, 1), s), expand_product(random_product(s, 2), s)};
  const std::vector<double> w{0.25, 0.75};
  const DensityOperator rho = DensityOperator::mixture(w, parts);
  EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-14);
  const Marginal m = partial_trace_last(rho);
  EXPECT_EQ(m.matrix.rows(), 2);
  EXPECT_NEAR(m.matrix.trace().real(), 1.0, 1e-14);
  const std::vector<double> bad{0.5, 0.6};
  EXPECT_THROW(DensityOperator::mixture(bad, parts), Error);
}

TEST(OperatorTensor, RoundTrips) {
  const SpaceShape s({2, 3});
  const CMatrix op = random_density(s, 4).matrix();
  const Tensor t = operator_as_tensor(op, s);
  EXPECT_EQ(t.dims(), (std::vector<std::size_t>{2, 2, 3, 3}));
  EXPECT_EQ((operator_from_tensor(t, s) - op).norm(), 0.0);
  EXPECT_NEAR(t.norm(), op.norm(), 1e-14);
}

TEST(ApplyLocal, ActsOnOneSlot) {
  const SpaceShape s({2, 3});
  const ProductVector p = random_product(s, 9);
  const CMatrix u = random_unitary(3, 10);
  const CVector moved = apply_local(s, expand_product(p, s).amplitudes(), 1, u);
  const ProductVector q({p.factor(0), u * p.factor(1)});
  EXPECT_NEAR((moved - q.expand().data()).norm(), 0.0, 1e-14);
}

TEST(Random, SeededAndWellFormed) {
  EXPECT_EQ(random_unit_vector(7, 3), random_unit_vector(7, 3));
  EXPECT_NE(random_unit_vector(7, 3), random_unit_vector(7, 4));
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CMatrix u = random_unitary(4, seed);
    EXPECT_LT((u.adjoint() * u - CMatrix::Identity(4, 4)).norm(), 1e-13);
    const CMatrix v = random_isometry(6, 3, seed);
    EXPECT_LT((v.adjoint() * v - CMatrix::Identity(3, 3)).norm(), 1e-13);
    const DensityOperator rho = random_density(SpaceShape({2, 3}), seed, 2);
    const auto eig = linalg::hermitian_eigen(rho.matrix());
    EXPECT_GT(eig.values(0), -1e-14);
    EXPECT_LT(std::abs(eig.values(3)), 1e-13);  // rank 2 of 6
  }
}

TEST(Linalg, BipartitionsAndComplement) {
  EXPECT_EQ(linalg::bipartitions(3).size(), 3u);
  EXPECT_EQ(linalg::bipartitions(4).size(), 7u);
  const CMatrix q = random_isometry(5, 2, 3);
  const CMatrix c = linalg::orthonormal_complement(q);
  EXPECT_EQ(c.cols(), 3);
  EXPECT_LT((q.adjoint() * c).norm(), 1e-13);
  EXPECT_LT((c.adjoint() * c - CMatrix::Identity(3, 3)).norm(), 1e-13);
  const CMatrix m = random_gaussian_vector(12, 2).reshaped(3, 4);
  EXPECT_NEAR(linalg::nuclear_norm(m), oracle::singular_values(m).sum(), 1e-12);
}
