#include <gtest/gtest.h>

#include "crit/counting.hpp"
#include "crit/critical_space.hpp"
#include "oracles.hpp"

using namespace crit;

namespace {

struct CodimCase {
  TensorFormat format;
  int codim;
};

}  // namespace

TEST(CriticalSpace, CodimensionOverSeeds) {
  const std::vector<CodimCase> cases = {{TensorFormat::ordinary({2, 2, 2}), 3},
                                        {TensorFormat::ordinary({3, 3}), 6},
                                        {TensorFormat::symmetric(3, 2), 1},
                                        {TensorFormat::ordinary({3, 3, 3}), 9},
                                        {TensorFormat::ordinary({2, 3}), 4},
                                        {TensorFormat::symmetric(3, 3), 3},
                                        {TensorFormat::ordinary({2, 2, 4}), 8}};
  for (const CodimCase& c : cases)
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const CriticalSpace H = critical_space(random_tensor(c.format, seed, true));
      EXPECT_EQ(H.codim, c.codim);
      EXPECT_EQ(H.codim, expected_codim(c.format).value);
      EXPECT_EQ(H.dim() + H.codim, c.format.space_dim());
      EXPECT_GE(H.gap, 1e4);
    }
}

TEST(CriticalSpace, BasisIsOrthonormalAndInKernel) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const TensorFormat fmt = oracle::random_format(rng, 30);
    const Tensor f = random_tensor(fmt, rng(), false);
    const CriticalSpace H = critical_space(f);
    const Index n = H.dim();
    EXPECT_LE((H.basis.adjoint() * H.basis - CMatrix::Identity(n, n)).norm(), 1e-10);
    for (Index i = 0; i < n; ++i) EXPECT_LE(membership_residual(f, H.basis_tensor(i)), 1e-10);
  }
}

TEST(CriticalSpace, ContainsF) {
  const std::vector<TensorFormat> formats = {TensorFormat::ordinary({2, 2, 2}), TensorFormat::ordinary({2, 3}),
                                             TensorFormat::ordinary({3, 3}),    TensorFormat::symmetric(3, 2),
                                             TensorFormat::symmetric(2, 3),     TensorFormat({3, 1}, {2, 3}),
                                             TensorFormat::ordinary({2, 2, 4})};
  for (const TensorFormat& fmt : formats)
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Tensor f = random_tensor(fmt, seed, seed % 2 == 0);
      EXPECT_LE(membership_residual(f, f), 1e-12);
    }
}

// For matrices H_A = {B : A B^T and A^T B symmetric}; built here directly from Kronecker products.
TEST(CriticalSpace, MatrixKernelMatchesSymmetryConditions) {
  for (const auto& [m, n] : std::vector<std::pair<int, int>>{{2, 3}, {3, 3}, {3, 4}, {4, 2}})
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const Tensor f = random_tensor(TensorFormat::ordinary({m, n}), seed, true);
      const CMatrix A = f.coeffs().reshaped<Eigen::RowMajor>(m, n);
      // vec is row-major: vec(B)_{i n + j} = B_ij
      CMatrix M(m * m + n * n, m * n);
      M.setZero();
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
          CMatrix B = CMatrix::Zero(m, n);
          B(i, j) = 1.0;
          const CMatrix S1 = A * B.transpose() - B * A.transpose();
          const CMatrix S2 = A.transpose() * B - B.transpose() * A;
          M.col(i * n + j) << S1.reshaped(), S2.reshaped();
        }
      const CMatrix want = rank_and_kernel(M).kernel_basis;
      const CriticalSpace H = critical_space(f);
      EXPECT_EQ(H.dim(), want.cols());
      EXPECT_LE(subspace_distance(H.basis, want), 1e-10);
    }
}

TEST(MembershipResidual, Homogeneous) {
  std::mt19937_64 rng(32);
  const TensorFormat fmt({2, 1}, {3, 2});
  const Tensor f = random_tensor(fmt, rng(), false), g = random_tensor(fmt, rng(), false);
  const double r = membership_residual(f, g);
  EXPECT_NEAR(membership_residual(f * cplx(3.0, 1.0), g), r, 1e-12 * r);
  EXPECT_NEAR(membership_residual(f, g * cplx(-0.5, 2.0)), r, 1e-12 * r);
}

TEST(MembershipResidual, OrthogonalComplementIsFarFromH) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const TensorFormat fmt = oracle::random_format(rng, 30);
    const Tensor f = random_tensor(fmt, rng(), true);
    const CriticalSpace H = critical_space(f);
    if (H.codim == 0) continue;
    CVector y = random_tensor(fmt, rng(), false).weighted_coords();
    y -= H.basis * (H.basis.adjoint() * y);
    const Tensor g = Tensor::from_weighted_coords(f.basis_ptr(), y);
    EXPECT_GT(membership_residual(f, g), 1e-4);
  }
}

TEST(CriticalSpace, Errors) {
  const TensorFormat fmt = TensorFormat::ordinary({2, 2});
  const Tensor zero(fmt);
  EXPECT_THROW(critical_space(zero), InputError);
  EXPECT_THROW(membership_residual(random_tensor(fmt, 1, true), zero), InputError);
  EXPECT_THROW(membership_residual(random_tensor(fmt, 1, true), random_tensor(TensorFormat::ordinary({2, 3}), 1, true)),
               InputError);
}

TEST(ConstraintMatrix, RowsMatchPairing) {
  std::mt19937_64 rng(34);
  const TensorFormat fmt({2, 1}, {3, 3});
  const Tensor f = random_tensor(fmt, rng(), false), g = random_tensor(fmt, rng(), false);
  const CVector Cg = constraint_matrix(f) * g.coeffs();
  for (int l = 0; l < fmt.factors(); ++l) {
    const AntisymElement p = pair_ell(f, g, l);
    const int off = constraint_row_offset(fmt, l);
    EXPECT_LE((Cg.segment(off, p.upper().size()) - p.upper()).norm(), 1e-12 * p.norm());
  }
}
