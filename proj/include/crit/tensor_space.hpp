#pragma once

// Partially symmetric tensors T = S^{d_1}V_1 (x) ... (x) S^{d_p}V_p in the monomial basis.
//
// Each V_l = C^{n_l+1} carries the standard (non-Hermitian) bilinear form with the
// standard basis orthonormal. A degree-d monomial e^a = e_1^{a_1}...e_m^{a_m} in S^d V
// then has (e^a | e^b) = delta_{ab} a!/d!, and a tensor f = sum_m f_m m is stored by its
// coefficients f_m. The monomial coefficients are exactly the coefficients of the
// multihomogeneous polynomial F(x_1,...,x_p) = (f | x_1^{d_1} (x) ... (x) x_p^{d_p}).

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "crit/linalg.hpp"

namespace crit {

using Index = Eigen::Index;
using Exponents = std::vector<int>;

class TensorFormat {
 public:
  TensorFormat() = default;
  /// degrees[l] = d_l >= 1, dims[l] = n_l + 1 >= 1.
  TensorFormat(std::vector<int> degrees, std::vector<int> dims);

  /// All factors with d = 1 (ordinary tensors), e.g. ordinary({2, 2, 2}).
  static TensorFormat ordinary(std::vector<int> dims);
  /// p = 1 symmetric power S^d C^m.
  static TensorFormat symmetric(int degree, int dim);

  int factors() const { return static_cast<int>(degrees_.size()); }
  int degree(int l) const { return degrees_.at(l); }
  int dim(int l) const { return dims_.at(l); }
  int proj_dim(int l) const { return dims_.at(l) - 1; }
  const std::vector<int>& degrees() const { return degrees_; }
  const std::vector<int>& dims() const { return dims_; }

  int total_degree() const;    // D
  int total_proj_dim() const;  // N
  Index space_dim() const;     // dim T

  /// n_l <= sum_{i != l} n_i
  bool triangle_ok(int l) const;
  /// triangle_ok for every l with d_l = 1.
  bool theorem_triangle_ok() const;
  /// triangle_ok for every l.
  bool all_triangle_ok() const;
  bool is_matrix() const { return factors() == 2 && degrees_[0] == 1 && degrees_[1] == 1; }

  friend bool operator==(const TensorFormat&, const TensorFormat&) = default;

 private:
  std::vector<int> degrees_;
  std::vector<int> dims_;
};

struct MonomialIndex {
  std::vector<Exponents> exponents;  // one exponent vector per factor
  int degree() const;
  friend bool operator==(const MonomialIndex&, const MonomialIndex&) = default;
};

/// Ordered monomial basis of a format. Per factor the exponent vectors are in
/// descending lexicographic order (x^2, xy, y^2); positions in T follow the
/// product order with the first factor most significant.
class MonomialBasis {
 public:
  static std::shared_ptr<const MonomialBasis> make(const TensorFormat& format);

  const TensorFormat& format() const { return format_; }
  Index size() const { return size_; }

  MonomialIndex monomial(Index pos) const;
  Index position(const MonomialIndex& m) const;
  /// Index of the factor-l part of basis position pos inside S^{d_l}V_l.
  int local_index(Index pos, int l) const { return static_cast<int>((pos / strides_[l]) % factor_size(l)); }
  Index stride(int l) const { return strides_[l]; }

  int factor_size(int l) const { return static_cast<int>(local_[l].size()); }
  const Exponents& local_exponents(int l, int k) const { return local_[l][k]; }
  /// -1 when the exponent vector is not a degree-d_l monomial of factor l.
  int local_lookup(int l, const Exponents& a) const;
  /// a!/d! for the k-th monomial of factor l.
  double local_weight(int l, int k) const { return local_weight_[l][k]; }
  /// multinomial(d; a)
  double local_multinomial(int l, int k) const { return local_multinomial_[l][k]; }

  /// Diagonal Gram weight w(m) = prod_l a^(l)!/d_l!.
  double weight(Index pos) const { return weights_(pos); }
  const RVector& weights() const { return weights_; }
  const RVector& sqrt_weights() const { return sqrt_weights_; }

  /// Kronecker product of per-factor coefficient vectors, in basis order.
  CVector kron(std::span<const CVector> per_factor) const;

 private:
  explicit MonomialBasis(const TensorFormat& format);

  TensorFormat format_;
  Index size_ = 0;
  std::vector<std::vector<Exponents>> local_;
  std::vector<std::vector<double>> local_weight_;
  std::vector<std::vector<double>> local_multinomial_;
  std::vector<Index> strides_;
  RVector weights_;
  RVector sqrt_weights_;
};

using BasisPtr = std::shared_ptr<const MonomialBasis>;

/// Degree-d exponent vectors in dim variables, descending lexicographic order.
std::vector<Exponents> monomials_of_degree(int degree, int dim);

/// Ordered monomial basis as a list.
std::vector<MonomialIndex> monomial_basis(const TensorFormat& format);

class Tensor {
 public:
  explicit Tensor(BasisPtr basis);
  Tensor(BasisPtr basis, CVector coeffs);
  explicit Tensor(const TensorFormat& format) : Tensor(MonomialBasis::make(format)) {}
  Tensor(const TensorFormat& format, CVector coeffs) : Tensor(MonomialBasis::make(format), std::move(coeffs)) {}

  const TensorFormat& format() const { return basis_->format(); }
  const MonomialBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  const CVector& coeffs() const { return coeffs_; }
  Index size() const { return coeffs_.size(); }
  cplx operator[](Index pos) const { return coeffs_(pos); }

  /// sqrt(w) .* coeffs: the Hermitian geometry of T becomes the standard one on these.
  CVector weighted_coords() const { return sqrt_weights().cwiseProduct(coeffs_); }
  static Tensor from_weighted_coords(BasisPtr basis, const CVector& y);

  bool is_zero() const { return coeffs_.isZero(0.0); }
  bool is_real(double tol = 0.0) const;

  Tensor operator+(const Tensor& o) const;
  Tensor operator-(const Tensor& o) const;
  Tensor operator*(cplx s) const;
  friend Tensor operator*(cplx s, const Tensor& t) { return t * s; }

 private:
  CVector sqrt_weights() const { return basis_->sqrt_weights().cast<cplx>(); }

  BasisPtr basis_;
  CVector coeffs_;
};

inline constexpr double kDefaultIsoTol = 1e-10;

/// (v_1, ..., v_p), one nonzero vector per factor; parametrizes x = v_1^{d_1} (x) ... (x) v_p^{d_p}.
class VectorTuple {
 public:
  VectorTuple() = default;
  explicit VectorTuple(std::vector<CVector> vectors);

  int factors() const { return static_cast<int>(vectors_.size()); }
  const CVector& operator[](int l) const { return vectors_.at(l); }
  const std::vector<CVector>& vectors() const { return vectors_; }

  /// Bilinear (v_l | v_l), no conjugation.
  cplx quadratic_value(int l) const;
  /// |(v_l|v_l)| <= iso_tol * |v_l|^2
  bool is_isotropic(int l, double iso_tol = kDefaultIsoTol) const;
  bool any_isotropic(double iso_tol = kDefaultIsoTol) const;

  VectorTuple with(int l, CVector v) const;
  /// Each v_l scaled to Hermitian unit norm with its first nonzero coordinate real positive.
  VectorTuple normalized() const;

 private:
  std::vector<CVector> vectors_;
};

/// Symmetric bilinear form (f|g) = sum_m w(m) f_m g_m.
cplx inner(const Tensor& f, const Tensor& g);
/// sqrt(sum_m w(m) |f_m|^2)
double hermitian_norm(const Tensor& f);

/// v_1^{d_1} (x) ... (x) v_p^{d_p}
Tensor rank_one(const BasisPtr& basis, const VectorTuple& t);
inline Tensor rank_one(const TensorFormat& format, const VectorTuple& t) {
  return rank_one(MonomialBasis::make(format), t);
}

/// u in V_l with (u|z) = (f | v_1^{d_1} (x) ... (x) v_l^{d_l-1} z (x) ... (x) v_p^{d_p}) for all z.
CVector contract(const Tensor& f, const VectorTuple& t, int l);

/// Columns: coefficient vectors of v_1^{d_1} (x) ... (x) v_l^{d_l-1}e_j (x) ... for every l, j.
CMatrix tangent_span(const BasisPtr& basis, const VectorTuple& t);

struct GcdResult {
  MonomialIndex gcd;
  int degree = 0;
};
GcdResult monomial_gcd(const MonomialIndex& m1, const MonomialIndex& m2);

/// i.i.d. standard Gaussian coefficients (complex ones have E|z|^2 = 1), deterministic per seed.
Tensor random_tensor(const TensorFormat& format, std::uint64_t seed, bool real_only);

/// Helpers shared by the solver: integer power that keeps 0^0 = 1.
cplx ipow(cplx z, int e);
double factorial(int n);

}  // namespace crit
