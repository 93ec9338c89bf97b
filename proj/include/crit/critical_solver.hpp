#pragma once

// Critical rank-one tensors of f: tuples (v_1, ..., v_p) with [f | v_1^{d_1} (x) ... ]_l = 0
// for every l, found by total-degree homotopy continuation in random affine charts.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crit/critical_space.hpp"
#include "crit/homotopy.hpp"

namespace crit {

/// Monomials of a tensor as a polynomial in the stacked coordinates of (v_1, ..., v_p),
/// with value, gradient and Hessian evaluation.
class MultiPoly {
 public:
  struct Term {
    cplx coef;
    std::vector<std::pair<int, int>> powers;  // (variable, exponent), exponent >= 1
  };

  MultiPoly() = default;
  explicit MultiPoly(const Tensor& f);

  int variables() const { return variables_; }
  /// Any of grad/hess may be null.
  cplx evaluate(const CVector& x, CVector* grad, CMatrix* hess) const;

 private:
  int variables_ = 0;
  int max_exponent_ = 0;
  std::vector<Term> terms_;
};

/// The N equations P_l(contract(f, t, l) ^ v_l) = 0 in the N chart unknowns.
class SquareSystem : public PolynomialSystem {
 public:
  SquareSystem(const Tensor& f, std::uint64_t seed);

  int size() const override { return unknowns_; }
  std::vector<int> degrees() const override;
  void evaluate(const CVector& z, CVector& value, CMatrix* jacobian) const override;

  const TensorFormat& format() const { return format_; }
  /// v_l = base_l + frame_l z_l
  VectorTuple tuple(const CVector& z) const;
  /// Chart coordinates of a tuple (each v_l rescaled onto its affine chart).
  CVector chart_coords(const VectorTuple& t) const;

  const CVector& chart_base(int l) const { return base_[l]; }
  const CMatrix& chart_frame(int l) const { return frame_[l]; }
  const CMatrix& projection(int l) const { return proj_[l]; }

 private:
  TensorFormat format_;
  MultiPoly poly_;
  std::vector<int> offset_;  // first stacked coordinate of factor l
  int unknowns_ = 0;
  int coords_ = 0;
  std::vector<CVector> base_;
  std::vector<CMatrix> frame_;
  std::vector<CMatrix> proj_;
};

struct CriticalPoint {
  VectorTuple tuple;  // unit vectors, first nonzero coordinate real positive
  std::optional<cplx> scale;  // empty for isotropic tuples
  std::optional<Tensor> tensor;
  double newton_residual = 0.0;
  std::vector<bool> isotropic;
  double membership = 0.0;
  double perpendicularity = 0.0;  // NaN when isotropic
  bool is_isotropic() const;
};

struct PathStats {
  std::size_t total = 0;
  std::size_t converged = 0;
  std::size_t diverged = 0;
  std::size_t failed = 0;
  std::size_t rejected_endpoints = 0;  // converged but residual above the acceptance cut
  std::size_t distinct = 0;
};

struct SolveResult {
  std::vector<CriticalPoint> points;
  PathStats stats;
  std::vector<std::string> warnings;
};

inline constexpr double kAcceptResidual = 1e-10;

/// Relative residual max_l |contract(f,t,l) ^ v_l| / (|f| prod_i |v_i|^{d_i}).
double critical_residual(const Tensor& f, const VectorTuple& t);

/// max over tangent columns tau of |(g | tau)| / (|g| |tau|), g = f - c x.
double perpendicularity_residual(const Tensor& f, const Tensor& cx, const VectorTuple& t);

/// Largest per-factor sine of the Hermitian angle between two tuples (projective distance).
double tuple_distance(const VectorTuple& a, const VectorTuple& b);

/// Builds the full CriticalPoint record for a tuple satisfying the equations.
CriticalPoint make_critical_point(const Tensor& f, const VectorTuple& t, double iso_tol = kDefaultIsoTol);

SolveResult solve_critical_rank_one(const Tensor& f, const TrackerConfig& cfg = {},
                                    double accept_residual = kAcceptResidual);

/// Columns: the scaled critical tensors of the non-isotropic points (plain coefficients).
CMatrix critical_tensor_matrix(const std::vector<CriticalPoint>& points);

}  // namespace crit
