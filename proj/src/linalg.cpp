#include "crit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace crit {

void require_finite(const CMatrix& A, const char* what) {
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      if (!std::isfinite(A(i, j).real()) || !std::isfinite(A(i, j).imag()))
        throw InputError(std::string(what) + ": non-finite entry");
}

RankResult rank_and_kernel(const CMatrix& A, double rel_tol) {
  if (A.cols() == 0) throw InputError("rank_and_kernel: matrix has no columns");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw InputError("rank_and_kernel: rel_tol must lie in (0,1)");
  require_finite(A, "rank_and_kernel");

  const Eigen::Index n = A.cols();
  RankResult out;
  out.tolerance_used = rel_tol;

  // Full V is needed for the kernel; pad with zero rows so that V is always n x n.
  CMatrix work = A;
  if (A.rows() < n) {
    work = CMatrix::Zero(n, n);
    work.topRows(A.rows()) = A;
  }
  Eigen::JacobiSVD<CMatrix> svd(work, Eigen::ComputeFullV);
  const RVector& s = svd.singularValues();
  out.singular_values = s.head(std::min<Eigen::Index>(A.rows(), n));

  const double smax = s.size() > 0 ? s(0) : 0.0;
  int rank = 0;
  if (smax > 0.0) {
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > rel_tol * smax) ++rank;
  }
  out.rank = rank;
  out.kernel_basis = rank == 0 ? CMatrix(CMatrix::Identity(n, n)) : CMatrix(svd.matrixV().rightCols(n - rank));

  if (rank == 0) {
    out.gap = A.rows() == 0 ? std::numeric_limits<double>::infinity() : 0.0;
  } else {
    // Padding rows only add structural zeros; they are not discarded values. The kernel
    // residual stands in for the discarded level when A has full row rank.
    const Eigen::Index genuine = std::min<Eigen::Index>(A.rows(), n);
    double discarded = rank < genuine ? s(rank) : 0.0;
    if (out.kernel_basis.cols() > 0) discarded = std::max(discarded, (A * out.kernel_basis).norm());
    discarded = std::max(discarded, std::numeric_limits<double>::epsilon() * smax);
    out.gap = s(rank - 1) / discarded;
  }
  return out;
}

LeastSquaresResult least_squares(const CMatrix& A, const CVector& b) {
  if (A.rows() != b.size()) throw InputError("least_squares: rows(A) != length(b)");
  require_finite(A, "least_squares");
  require_finite(b, "least_squares");
  LeastSquaresResult out;
  if (A.cols() == 0) {
    out.x = CVector(0);
    out.residual = b.norm();
    return out;
  }
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(A);
  out.x = cod.solve(b);
  out.residual = (A * out.x - b).norm();
  return out;
}

SvdResult hermitian_svd_baseline(const RMatrix& A) {
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      if (!std::isfinite(A(i, j))) throw InputError("hermitian_svd_baseline: non-finite entry");
  Eigen::JacobiSVD<RMatrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

CMatrix column_space(const CMatrix& A, double rel_tol) {
  if (A.cols() == 0) return CMatrix(A.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeThinU);
  const RVector& s = svd.singularValues();
  int rank = 0;
  if (s.size() > 0 && s(0) > 0.0)
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > rel_tol * s(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

double subspace_distance(const CMatrix& A, const CMatrix& B, double rel_tol) {
  const CMatrix QA = column_space(A, rel_tol);
  const CMatrix QB = column_space(B, rel_tol);
  if (QA.cols() != QB.cols()) return 1.0;
  if (QA.cols() == 0) return 0.0;
  // sin of the largest principal angle = |(I - QB QB^*) QA|_2
  const CMatrix R = QA - QB * (QB.adjoint() * QA);
  Eigen::JacobiSVD<CMatrix> svd(R);
  return std::min(1.0, svd.singularValues()(0));
}

}  // namespace crit
