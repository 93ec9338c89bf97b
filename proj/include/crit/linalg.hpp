#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace crit {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Malformed or out-of-contract input (bad dimensions, non-finite entries, ...).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Input that is valid but too special for the requested computation.
class DegenerateInputError : public std::runtime_error {
 public:
  explicit DegenerateInputError(const std::string& what) : std::runtime_error(what) {}
};

struct RankResult {
  int rank = 0;
  CMatrix kernel_basis;  // orthonormal columns spanning ker(A)
  double tolerance_used = 0.0;
  RVector singular_values;  // descending
  // sigma_rank over the discarded level: max(sigma_{rank+1}, |A K|_F, eps sigma_1).
  double gap = 0.0;
};

struct LeastSquaresResult {
  CVector x;
  double residual = 0.0;
};

struct SvdResult {
  RMatrix U;
  RVector sigma;
  RMatrix V;
};

inline constexpr double kDefaultRankTol = 1e-8;

void require_finite(const CMatrix& A, const char* what);

/// Numerical rank with a relative singular-value cut, plus an orthonormal kernel basis.
RankResult rank_and_kernel(const CMatrix& A, double rel_tol = kDefaultRankTol);

/// Minimizer of the Hermitian norm |Ax - b| (minimum-norm solution when A is rank deficient).
LeastSquaresResult least_squares(const CMatrix& A, const CVector& b);

/// Real SVD A = U diag(sigma) V^T, sigma descending. Matrix oracle only.
SvdResult hermitian_svd_baseline(const RMatrix& A);

/// Orthonormal basis of the column space (numerical rank at rel_tol).
CMatrix column_space(const CMatrix& A, double rel_tol = kDefaultRankTol);

/// Largest principal-angle sine between two subspaces given by (any) spanning columns.
/// Returns 0 for equal spans, 1 if some direction of one is orthogonal to the other.
double subspace_distance(const CMatrix& A, const CMatrix& B, double rel_tol = kDefaultRankTol);

}  // namespace crit
