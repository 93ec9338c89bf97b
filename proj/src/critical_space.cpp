#include "crit/critical_space.hpp"

#include <algorithm>

namespace crit {

Tensor CriticalSpace::basis_tensor(Index i) const {
  return Tensor::from_weighted_coords(f_ref.basis_ptr(), basis.col(i));
}

int constraint_row_offset(const TensorFormat& format, int l) {
  int off = 0;
  for (int i = 0; i < l; ++i) off += AntisymElement::pair_count(format.dim(i));
  return off;
}

CMatrix constraint_matrix(const Tensor& f) {
  const MonomialBasis& basis = f.basis();
  const TensorFormat& fmt = basis.format();
  const int rows = constraint_row_offset(fmt, fmt.factors());
  CMatrix C = CMatrix::Zero(rows, basis.size());
  const CVector& fc = f.coeffs();

  for (int l = 0; l < fmt.factors(); ++l) {
    const int off = constraint_row_offset(fmt, l);
    const AntisymElement slots(l, fmt.dim(l));
    const auto table = pair_neighbours(basis, l);
    const Index stride = basis.stride(l);
    for (Index pos = 0; pos < basis.size(); ++pos) {
      if (fc(pos) == cplx(0.0, 0.0)) continue;
      const int k = basis.local_index(pos, l);
      const double w_rest = basis.weight(pos) / basis.local_weight(l, k);
      for (const PairNeighbour& nb : table[k]) {
        const Index col = pos + (static_cast<Index>(nb.other) - k) * stride;
        const cplx v = (w_rest * nb.coef) * fc(pos);
        if (nb.a < nb.b)
          C(off + slots.slot(nb.a, nb.b), col) += v;
        else
          C(off + slots.slot(nb.b, nb.a), col) -= v;
      }
    }
  }
  return C;
}

CriticalSpace critical_space(const Tensor& f, double rel_tol) {
  if (f.is_zero()) throw InputError("critical_space: f = 0");
  const CMatrix C = constraint_matrix(f);
  // Work in weighted coordinates y = sqrt(w) g so that the kernel basis is orthonormal in T.
  const CMatrix Cw = C * f.basis().sqrt_weights().cwiseInverse().cast<cplx>().asDiagonal();
  const RankResult rr = rank_and_kernel(Cw, rel_tol);
  CriticalSpace out{f.format(), f, rr.kernel_basis, rr.rank, rr.gap, rr.singular_values};
  return out;
}

double membership_residual(const Tensor& f, const Tensor& g) {
  if (g.is_zero()) throw InputError("membership_residual: g = 0");
  if (f.format() != g.format()) throw InputError("membership_residual: format mismatch");
  const double scale = hermitian_norm(f) * hermitian_norm(g);
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (int l = 0; l < f.format().factors(); ++l) worst = std::max(worst, pair_ell(f, g, l).norm() / scale);
  return worst;
}

}  // namespace crit
