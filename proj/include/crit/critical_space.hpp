#pragma once

#include "crit/pairing.hpp"

namespace crit {

/// H_f = { g : [f|g]_l = 0 for every l }.
struct CriticalSpace {
  TensorFormat format;
  Tensor f_ref;
  /// Orthonormal columns in weighted coordinates (see Tensor::weighted_coords), so the
  /// columns are orthonormal for the Hermitian form on T.
  CMatrix basis;
  int codim = 0;
  /// Smallest kept singular value of the constraint map over the discarded level (see RankResult::gap).
  double gap = 0.0;
  RVector singular_values;

  Index dim() const { return basis.cols(); }
  Tensor basis_tensor(Index i) const;
};

/// Row (l, a<b) maps g to the (a, b) entry of pair_ell(f, g, l); columns follow the
/// monomial basis (plain coefficients, not weighted coordinates).
CMatrix constraint_matrix(const Tensor& f);

/// Row offset of factor l inside constraint_matrix.
int constraint_row_offset(const TensorFormat& format, int l);

CriticalSpace critical_space(const Tensor& f, double rel_tol = kDefaultRankTol);

/// max_l |[f|g]_l| / (|f| |g|), Hermitian norms.
double membership_residual(const Tensor& f, const Tensor& g);

}  // namespace crit
