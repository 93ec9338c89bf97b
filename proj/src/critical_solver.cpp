#include "crit/critical_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace crit {

// ---------------------------------------------------------------------------
// MultiPoly

MultiPoly::MultiPoly(const Tensor& f) {
  const MonomialBasis& b = f.basis();
  const TensorFormat& fmt = b.format();
  std::vector<int> offset(fmt.factors(), 0);
  for (int l = 0; l < fmt.factors(); ++l) {
    offset[l] = variables_;
    variables_ += fmt.dim(l);
  }
  for (Index pos = 0; pos < b.size(); ++pos) {
    if (f[pos] == cplx(0.0, 0.0)) continue;
    Term term{f[pos], {}};
    for (int l = 0; l < fmt.factors(); ++l) {
      const Exponents& a = b.local_exponents(l, b.local_index(pos, l));
      for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] == 0) continue;
        term.powers.emplace_back(offset[l] + static_cast<int>(j), a[j]);
        max_exponent_ = std::max(max_exponent_, a[j]);
      }
    }
    terms_.push_back(std::move(term));
  }
}

cplx MultiPoly::evaluate(const CVector& x, CVector* grad, CMatrix* hess) const {
  if (x.size() != variables_) throw InputError("MultiPoly::evaluate: wrong number of variables");
  // pw(v, e) = x_v^e
  CMatrix pw(variables_, max_exponent_ + 1);
  for (int v = 0; v < variables_; ++v) {
    pw(v, 0) = 1.0;
    for (int e = 1; e <= max_exponent_; ++e) pw(v, e) = pw(v, e - 1) * x(v);
  }
  if (grad) grad->setZero(variables_);
  if (hess) hess->setZero(variables_, variables_);

  cplx value(0.0, 0.0);
  std::vector<cplx> base, d1, d2;
  for (const Term& term : terms_) {
    const std::size_t s = term.powers.size();
    base.resize(s);
    d1.resize(s);
    d2.resize(s);
    cplx prod = term.coef;
    for (std::size_t j = 0; j < s; ++j) {
      const auto [v, e] = term.powers[j];
      base[j] = pw(v, e);
      d1[j] = static_cast<double>(e) * pw(v, e - 1);
      d2[j] = e >= 2 ? static_cast<double>(e * (e - 1)) * pw(v, e - 2) : cplx(0.0, 0.0);
      prod *= base[j];
    }
    value += prod;
    if (!grad && !hess) continue;
    for (std::size_t k = 0; k < s; ++k) {
      cplx rest = term.coef;
      for (std::size_t j = 0; j < s; ++j)
        if (j != k) rest *= base[j];
      const int vk = term.powers[k].first;
      if (grad) (*grad)(vk) += rest * d1[k];
      if (!hess) continue;
      (*hess)(vk, vk) += rest * d2[k];
      for (std::size_t m = k + 1; m < s; ++m) {
        cplx rest2 = term.coef;
        for (std::size_t j = 0; j < s; ++j)
          if (j != k && j != m) rest2 *= base[j];
        const int vm = term.powers[m].first;
        const cplx h = rest2 * d1[k] * d1[m];
        (*hess)(vk, vm) += h;
        (*hess)(vm, vk) += h;
      }
    }
  }
  return value;
}

// ---------------------------------------------------------------------------
// SquareSystem

namespace {

CMatrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix G(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      G(i, j) = cplx(re, im);
    }
  Eigen::HouseholderQR<CMatrix> qr(G);
  return qr.householderQ() * CMatrix::Identity(n, n);
}

}  // namespace

SquareSystem::SquareSystem(const Tensor& f, std::uint64_t seed) : format_(f.format()), poly_(f) {
  if (f.is_zero()) throw InputError("build_system: f = 0");
  std::mt19937_64 rng(seed);
  const int p = format_.factors();
  offset_.resize(p);
  for (int l = 0; l < p; ++l) {
    const int m = format_.dim(l);
    offset_[l] = coords_;
    coords_ += m;
    unknowns_ += m - 1;
    const CMatrix U = random_unitary(m, rng);
    base_.push_back(U.col(0));
    frame_.push_back(U.rightCols(m - 1));
    const int pairs = AntisymElement::pair_count(m);
    const CMatrix W = random_unitary(std::max(pairs, 1), rng);
    proj_.push_back(W.topLeftCorner(m - 1, pairs));
  }
}

std::vector<int> SquareSystem::degrees() const {
  return std::vector<int>(static_cast<std::size_t>(unknowns_), format_.total_degree());
}

VectorTuple SquareSystem::tuple(const CVector& z) const {
  std::vector<CVector> vs;
  int zo = 0;
  for (int l = 0; l < format_.factors(); ++l) {
    const int n = format_.dim(l) - 1;
    vs.push_back(base_[l] + frame_[l] * z.segment(zo, n));
    zo += n;
  }
  return VectorTuple(std::move(vs));
}

CVector SquareSystem::chart_coords(const VectorTuple& t) const {
  CVector z(unknowns_);
  int zo = 0;
  for (int l = 0; l < format_.factors(); ++l) {
    const int n = format_.dim(l) - 1;
    const cplx s = base_[l].dot(t[l]);  // conjugates base
    z.segment(zo, n) = frame_[l].adjoint() * t[l] / s;
    zo += n;
  }
  return z;
}

void SquareSystem::evaluate(const CVector& z, CVector& value, CMatrix* jacobian) const {
  const int p = format_.factors();
  CVector x(coords_);
  CMatrix dxdz = CMatrix::Zero(coords_, unknowns_);
  int zo = 0;
  for (int l = 0; l < p; ++l) {
    const int m = format_.dim(l);
    x.segment(offset_[l], m) = base_[l] + frame_[l] * z.segment(zo, m - 1);
    dxdz.block(offset_[l], zo, m, m - 1) = frame_[l];
    zo += m - 1;
  }

  CVector grad;
  CMatrix hess;
  poly_.evaluate(x, &grad, jacobian ? &hess : nullptr);

  value.resize(unknowns_);
  if (jacobian) jacobian->setZero(unknowns_, unknowns_);
  int row = 0;
  for (int l = 0; l < p; ++l) {
    const int m = format_.dim(l);
    if (m == 1) continue;
    const double inv_d = 1.0 / format_.degree(l);
    const CVector u = grad.segment(offset_[l], m) * inv_d;
    const CVector v = x.segment(offset_[l], m);
    const int pairs = AntisymElement::pair_count(m);
    CVector w(pairs);
    CMatrix dw;
    if (jacobian) dw.setZero(pairs, coords_);
    int s = 0;
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b, ++s) {
        w(s) = u(a) * v(b) - u(b) * v(a);
        if (!jacobian) continue;
        dw.row(s) = (hess.row(offset_[l] + a) * v(b) - hess.row(offset_[l] + b) * v(a)) * inv_d;
        dw(s, offset_[l] + b) += u(a);
        dw(s, offset_[l] + a) -= u(b);
      }
    }
    value.segment(row, m - 1) = proj_[l] * w;
    if (jacobian) jacobian->middleRows(row, m - 1) = proj_[l] * dw * dxdz;
    row += m - 1;
  }
}

// ---------------------------------------------------------------------------
// Critical points

bool CriticalPoint::is_isotropic() const {
  return std::any_of(isotropic.begin(), isotropic.end(), [](bool b) { return b; });
}

double critical_residual(const Tensor& f, const VectorTuple& t) {
  double scale = hermitian_norm(f);
  for (int i = 0; i < t.factors(); ++i) scale *= std::pow(t[i].norm(), f.format().degree(i));
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (int l = 0; l < t.factors(); ++l) worst = std::max(worst, pair_rank_one(f, t, l).norm() / scale);
  return worst;
}

double perpendicularity_residual(const Tensor& f, const Tensor& cx, const VectorTuple& t) {
  const Tensor g = f - cx;
  const double gn = hermitian_norm(g);
  if (gn == 0.0) return 0.0;
  const CMatrix T = tangent_span(f.basis_ptr(), t);
  double worst = 0.0;
  for (Index c = 0; c < T.cols(); ++c) {
    const Tensor tau(f.basis_ptr(), T.col(c));
    const double tn = hermitian_norm(tau);
    if (tn == 0.0) continue;
    worst = std::max(worst, std::abs(inner(g, tau)) / (gn * tn));
  }
  return worst;
}

double tuple_distance(const VectorTuple& a, const VectorTuple& b) {
  double worst = 0.0;
  for (int l = 0; l < a.factors(); ++l) {
    const CVector u = a[l].normalized(), v = b[l].normalized();
    worst = std::max(worst, (v - u * u.dot(v)).norm());
  }
  return worst;
}

CriticalPoint make_critical_point(const Tensor& f, const VectorTuple& t, double iso_tol) {
  CriticalPoint pt;
  pt.tuple = t.normalized();
  const Tensor x = rank_one(f.basis_ptr(), pt.tuple);
  for (int l = 0; l < pt.tuple.factors(); ++l) pt.isotropic.push_back(pt.tuple.is_isotropic(l, iso_tol));
  pt.newton_residual = critical_residual(f, pt.tuple);
  if (!pt.is_isotropic()) {
    const cplx c = inner(f, x) / inner(x, x);
    pt.scale = c;
    pt.tensor = x * c;
    pt.membership = pt.tensor->is_zero() ? membership_residual(f, x) : membership_residual(f, *pt.tensor);
    pt.perpendicularity = perpendicularity_residual(f, *pt.tensor, pt.tuple);
  } else {
    pt.membership = membership_residual(f, x);
    pt.perpendicularity = std::numeric_limits<double>::quiet_NaN();
  }
  return pt;
}

namespace {

bool canonical_less(const CriticalPoint& a, const CriticalPoint& b) {
  if (a.is_isotropic() != b.is_isotropic()) return !a.is_isotropic();
  const double ca = a.scale ? std::abs(*a.scale) : 0.0;
  const double cb = b.scale ? std::abs(*b.scale) : 0.0;
  if (ca != cb) return ca > cb;
  for (int l = 0; l < a.tuple.factors(); ++l)
    for (Index i = 0; i < a.tuple[l].size(); ++i) {
      const cplx x = a.tuple[l](i);
      const cplx y = b.tuple[l](i);
      if (x.real() != y.real()) return x.real() < y.real();
      if (x.imag() != y.imag()) return x.imag() < y.imag();
    }
  return false;
}

}  // namespace

SolveResult solve_critical_rank_one(const Tensor& f, const TrackerConfig& cfg, double accept_residual) {
  if (f.is_zero()) throw InputError("solve_critical_rank_one: f = 0");
  const SquareSystem sys(f, cfg.seed);
  SolveResult out;

  struct Candidate {
    VectorTuple tuple;
    double residual;
  };
  std::vector<Candidate> candidates;

  if (sys.size() == 0) {
    // P X is a single point.
    out.stats.total = 1;
    const VectorTuple t = sys.tuple(CVector(0));
    const double r = critical_residual(f, t);
    out.stats.converged = 1;
    candidates.push_back({t, r});
  } else {
    const TotalDegreeStart start = TotalDegreeStart::random(sys.degrees(), cfg.seed + 1);
    const std::vector<PathResult> paths = track_all(sys, start, cfg);
    out.stats.total = paths.size();
    for (const PathResult& pr : paths) {
      switch (pr.status) {
        case PathStatus::kConverged: {
          ++out.stats.converged;
          const VectorTuple t = sys.tuple(pr.z);
          const double r = critical_residual(f, t);
          if (r <= accept_residual)
            candidates.push_back({t.normalized(), r});
          else
            ++out.stats.rejected_endpoints;
          break;
        }
        case PathStatus::kDiverged:
          ++out.stats.diverged;
          break;
        case PathStatus::kFailed:
          ++out.stats.failed;
          break;
      }
    }
  }

  // Projective dedupe in path order.
  std::vector<Candidate> reps;
  for (const Candidate& c : candidates) {
    bool merged = false;
    for (Candidate& r : reps) {
      const double dist = tuple_distance(c.tuple, r.tuple);
      if (dist < cfg.dedupe_distance) {
        if (c.residual < r.residual) r = c;
        merged = true;
        break;
      }
      if (dist < 100.0 * cfg.dedupe_distance) {
        std::ostringstream msg;
        msg << "solve_critical_rank_one: ambiguous endpoint cluster (distance " << dist
            << "); f looks non-generic";
        throw DegenerateInputError(msg.str());
      }
    }
    if (!merged) reps.push_back(c);
  }

  for (const Candidate& r : reps) out.points.push_back(make_critical_point(f, r.tuple));
  std::sort(out.points.begin(), out.points.end(), canonical_less);
  out.stats.distinct = out.points.size();

  // Rejected endpoints are roots of the projected system that are not critical; not failures.
  if (static_cast<double>(out.stats.failed) > 0.05 * static_cast<double>(out.stats.total)) {
    std::ostringstream msg;
    msg << "path failures: " << out.stats.failed << " of " << out.stats.total << " paths failed ("
        << out.stats.converged << " converged, " << out.stats.diverged << " diverged)";
    out.warnings.push_back(msg.str());
  }
  return out;
}

CMatrix critical_tensor_matrix(const std::vector<CriticalPoint>& points) {
  std::vector<const Tensor*> cols;
  for (const CriticalPoint& p : points)
    if (p.tensor) cols.push_back(&*p.tensor);
  if (cols.empty()) return CMatrix(0, 0);
  CMatrix M(cols.front()->size(), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) M.col(static_cast<Index>(i)) = cols[i]->coeffs();
  return M;
}

}  // namespace crit
