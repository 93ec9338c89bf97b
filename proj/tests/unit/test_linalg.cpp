#include <gtest/gtest.h>

#include "crit/linalg.hpp"
#include "oracles.hpp"

using namespace crit;

TEST(RankAndKernel, KnownRank) {
  std::mt19937_64 rng(81);
  for (int r = 1; r <= 4; ++r) {
    CMatrix L(6, r), R(r, 5);
    for (int j = 0; j < r; ++j) L.col(j) = oracle::random_vector(rng, 6);
    for (int i = 0; i < r; ++i) R.row(i) = oracle::random_vector(rng, 5).transpose();
    const CMatrix A = L * R;
    const RankResult rr = rank_and_kernel(A);
    EXPECT_EQ(rr.rank, r);
    ASSERT_EQ(rr.kernel_basis.cols(), 5 - r);
    EXPECT_LE((A * rr.kernel_basis).norm(), 1e-12 * A.norm());
    EXPECT_LE((rr.kernel_basis.adjoint() * rr.kernel_basis - CMatrix::Identity(5 - r, 5 - r)).norm(), 1e-12);
    EXPECT_GT(rr.gap, 1e10);
  }
}

TEST(RankAndKernel, WideAndDegenerate) {
  CMatrix A(1, 3);
  A << 1.0, 0.0, 0.0;
  const RankResult rr = rank_and_kernel(A);
  EXPECT_EQ(rr.rank, 1);
  EXPECT_EQ(rr.kernel_basis.cols(), 2);
  EXPECT_EQ(rr.singular_values.size(), 1);
  EXPECT_GT(rr.gap, 1e15);

  const RankResult none = rank_and_kernel(CMatrix(0, 3));
  EXPECT_EQ(none.rank, 0);
  EXPECT_EQ(none.kernel_basis.cols(), 3);

  const RankResult zero = rank_and_kernel(CMatrix::Zero(2, 2));
  EXPECT_EQ(zero.rank, 0);

  EXPECT_THROW(rank_and_kernel(CMatrix(2, 0)), InputError);
  EXPECT_THROW(rank_and_kernel(A, 0.0), InputError);
  A(0, 1) = std::nan("");
  EXPECT_THROW(rank_and_kernel(A), InputError);
}

TEST(RankAndKernel, GapSeparatesCut) {
  CMatrix A = CMatrix::Zero(3, 3);
  A(0, 0) = 1.0;
  A(1, 1) = 1e-3;
  A(2, 2) = 1e-12;
  const RankResult rr = rank_and_kernel(A, 1e-8);
  EXPECT_EQ(rr.rank, 2);
  EXPECT_NEAR(rr.gap, 1e9, 1e-3);
}

TEST(LeastSquares, ResidualAndMinimumNorm) {
  CMatrix A(3, 2);
  A << 1.0, 0.0, 0.0, 1.0, 0.0, 0.0;
  CVector b(3);
  b << 1.0, 2.0, 3.0;
  const LeastSquaresResult r = least_squares(A, b);
  EXPECT_NEAR(std::abs(r.x(0) - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(r.x(1) - 2.0), 0.0, 1e-14);
  EXPECT_NEAR(r.residual, 3.0, 1e-14);

  CMatrix D(1, 2);
  D << 1.0, 1.0;
  const LeastSquaresResult m = least_squares(D, CVector::Ones(1));
  EXPECT_NEAR(std::abs(m.x(0) - 0.5), 0.0, 1e-14);
  EXPECT_THROW(least_squares(A, CVector::Ones(2)), InputError);
}

TEST(SvdBaseline, Reconstructs) {
  std::mt19937_64 rng(82);
  RMatrix A(3, 4);
  for (Index i = 0; i < A.size(); ++i) A.data()[i] = oracle::random_vector(rng, 1, true)(0).real();
  const SvdResult s = hermitian_svd_baseline(A);
  const Index k = s.sigma.size();
  EXPECT_LE((s.U.leftCols(k) * s.sigma.asDiagonal() * s.V.leftCols(k).transpose() - A).norm(), 1e-12);
  EXPECT_LE((s.U.transpose() * s.U - RMatrix::Identity(3, 3)).norm(), 1e-12);
  EXPECT_LE((s.V.transpose() * s.V - RMatrix::Identity(4, 4)).norm(), 1e-12);
  EXPECT_TRUE(std::is_sorted(s.sigma.data(), s.sigma.data() + s.sigma.size(), std::greater<>()));
}

TEST(SubspaceDistance, Basics) {
  const CMatrix e12 = CMatrix::Identity(3, 2);
  CMatrix other(3, 2);
  other << 1.0, 1.0, 1.0, -1.0, 0.0, 0.0;
  EXPECT_LE(subspace_distance(e12, other), 1e-14);
  EXPECT_NEAR(subspace_distance(e12, CMatrix::Identity(3, 3).rightCols(1)), 1.0, 1e-14);
  CMatrix tilt(3, 2);
  tilt << 1.0, 0.0, 0.0, 1.0, 0.0, 1e-3;
  EXPECT_NEAR(subspace_distance(e12, tilt), 1e-3, 1e-8);
}
