#pragma once

// Skew-symmetric pairings [.|.]_l : T x T -> wedge^2 V_l.
//
// Normalization: on monomials the pairing is fixed by
//   [e^a | e^b] = ((g_a+1)(g_b+1) g!) / (d * d!) * e_a ^ e_b,   a = g + e_a, b = g + e_b,
// times the inner-product weight of the shared off-l part. For matrices this gives
// exactly [A|B]_1 = A B^T - B A^T and [A|B]_2 = A^T B - B^T A (constant 1).

#include <vector>

#include "crit/tensor_space.hpp"

namespace crit {

/// Element of wedge^2 C^m stored as its strict upper triangle (a < b, row-major).
class AntisymElement {
 public:
  AntisymElement() = default;
  AntisymElement(int factor, int dim);

  int factor() const { return factor_; }
  int dim() const { return dim_; }
  /// M(a, b); M(b, a) = -M(a, b), M(a, a) = 0.
  cplx at(int a, int b) const;
  void add(int a, int b, cplx value);
  const CVector& upper() const { return upper_; }
  CMatrix matrix() const;
  /// Hermitian norm in the basis {e_a ^ e_b : a < b}.
  double norm() const { return upper_.norm(); }

  AntisymElement operator+(const AntisymElement& o) const;
  AntisymElement operator*(cplx s) const;

  static int pair_count(int dim) { return dim * (dim - 1) / 2; }
  int slot(int a, int b) const;  // a < b

 private:
  int factor_ = 0;
  int dim_ = 0;
  CVector upper_;
};

/// u ^ v as an antisymmetric matrix: (u^v)_{ab} = u_a v_b - u_b v_a.
AntisymElement wedge(const CVector& u, const CVector& v, int factor = 0);

AntisymElement pair_monomials(const TensorFormat& format, const MonomialIndex& m1, const MonomialIndex& m2, int l);
AntisymElement pair_ell(const Tensor& f, const Tensor& g, int l);
/// [f | v_1^{d_1} (x) ... (x) v_p^{d_p}]_l computed as contract(f, t, l) ^ v_l.
AntisymElement pair_rank_one(const Tensor& f, const VectorTuple& t, int l);

/// Binary forms (p = 1, dim V = 2): D(f) = x df/dy - y df/dx.
Tensor binary_D(const Tensor& f);

/// Nonzero pairing coefficients of one factor-l monomial with its neighbours.
struct PairNeighbour {
  int a = 0;        // index moved out of the first monomial
  int b = 0;        // index moved into the second monomial
  int other = 0;    // local index of the second monomial
  double coef = 0;  // (a_b + 1) a! / (d d!), excluding the off-l weight
};
/// Table indexed by local monomial index of factor l.
std::vector<std::vector<PairNeighbour>> pair_neighbours(const MonomialBasis& basis, int l);

}  // namespace crit
