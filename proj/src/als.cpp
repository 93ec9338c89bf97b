#include "crit/als.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <random>

namespace crit {

namespace {

RVector real_sym_power(const MonomialBasis& b, int l, const RVector& v) {
  const int K = b.factor_size(l);
  RVector out(K);
  for (int k = 0; k < K; ++k) {
    const Exponents& a = b.local_exponents(l, k);
    double r = b.local_multinomial(l, k);
    for (std::size_t j = 0; j < a.size(); ++j) r *= std::pow(v(j), a[j]);
    out(k) = r;
  }
  return out;
}

// coefficients of d/dv_j of v^d = d * v^{d-1} e_j
RVector real_sym_power_derivative(const MonomialBasis& b, int l, const RVector& v, int j) {
  const int K = b.factor_size(l);
  RVector out(K);
  for (int k = 0; k < K; ++k) {
    const Exponents& a = b.local_exponents(l, k);
    if (a[j] == 0) {
      out(k) = 0.0;
      continue;
    }
    double r = b.local_multinomial(l, k) * a[j];
    for (std::size_t i = 0; i < a.size(); ++i)
      r *= std::pow(v(i), a[i] - (static_cast<int>(i) == j ? 1 : 0));
    out(k) = r;
  }
  return out;
}

RVector real_kron(const MonomialBasis& b, const std::vector<RVector>& parts) {
  RVector out(b.size());
  for (Index pos = 0; pos < b.size(); ++pos) {
    double v = 1.0;
    for (int l = 0; l < b.format().factors(); ++l) v *= parts[l](b.local_index(pos, l));
    out(pos) = v;
  }
  return out;
}

struct State {
  const MonomialBasis& basis;
  RVector f;   // plain real coefficients
  RVector sw;  // sqrt weights
  std::vector<RankOneTerm> terms;

  std::vector<RVector> powers(const RankOneTerm& t) const {
    std::vector<RVector> parts;
    for (int l = 0; l < basis.format().factors(); ++l) parts.push_back(real_sym_power(basis, l, t.vectors[l]));
    return parts;
  }

  RVector model() const {
    RVector g = RVector::Zero(basis.size());
    for (const RankOneTerm& t : terms) g += t.lambda * real_kron(basis, powers(t));
    return g;
  }

  double objective() const { return (sw.cwiseProduct(f - model())).squaredNorm(); }
};

RVector solve_ls(const RMatrix& A, const RVector& b) {
  Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(A);
  return cod.solve(b);
}

void normalize_term(RankOneTerm& t, int l, int degree) {
  const double n = t.vectors[l].norm();
  if (n == 0.0 || !std::isfinite(n)) return;
  t.vectors[l] /= n;
  t.lambda *= std::pow(n, degree);
}

void update_linear_block(State& s, int l) {
  const MonomialBasis& b = s.basis;
  const int m = b.format().dim(l);
  const int k = static_cast<int>(s.terms.size());
  RMatrix A(b.size(), k * m);
  for (int i = 0; i < k; ++i) {
    std::vector<RVector> parts = s.powers(s.terms[i]);
    for (int j = 0; j < m; ++j) {
      parts[l] = RVector::Unit(m, j);
      A.col(i * m + j) = s.sw.cwiseProduct(real_kron(b, parts)) * s.terms[i].lambda;
    }
  }
  const RVector sol = solve_ls(A, s.sw.cwiseProduct(s.f));
  for (int i = 0; i < k; ++i) {
    RVector v = sol.segment(i * m, m);
    if (v.norm() == 0.0 || !v.allFinite()) continue;
    s.terms[i].vectors[l] = v;
    normalize_term(s.terms[i], l, 1);
  }
}

// Gauss-Newton direction with backtracking; falls back to the gradient direction.
void update_symmetric_block(State& s, int l) {
  const MonomialBasis& b = s.basis;
  const int m = b.format().dim(l);
  const int d = b.format().degree(l);
  const int k = static_cast<int>(s.terms.size());

  const RVector r = s.sw.cwiseProduct(s.f - s.model());
  const double obj = r.squaredNorm();
  RMatrix J(b.size(), k * m);
  for (int i = 0; i < k; ++i) {
    std::vector<RVector> parts = s.powers(s.terms[i]);
    for (int j = 0; j < m; ++j) {
      parts[l] = real_sym_power_derivative(b, l, s.terms[i].vectors[l], j);
      J.col(i * m + j) = s.sw.cwiseProduct(real_kron(b, parts)) * s.terms[i].lambda;
    }
  }
  const RVector grad_half = J.transpose() * r;  // -1/2 gradient of the objective
  RVector dir = solve_ls(J, r);
  if (!dir.allFinite() || dir.dot(grad_half) <= 0.0) dir = grad_half;
  const double slope = dir.dot(grad_half);
  if (slope <= 0.0) return;

  const std::vector<RankOneTerm> saved = s.terms;
  double step = 1.0;
  for (int tries = 0; tries < 40; ++tries, step *= 0.5) {
    for (int i = 0; i < k; ++i) s.terms[i].vectors[l] = saved[i].vectors[l] + step * dir.segment(i * m, m);
    if (s.objective() <= obj - 2e-4 * step * slope) {
      for (int i = 0; i < k; ++i) normalize_term(s.terms[i], l, d);
      return;
    }
  }
  s.terms = saved;
}

void update_scales(State& s) {
  const int k = static_cast<int>(s.terms.size());
  RMatrix A(s.basis.size(), k);
  for (int i = 0; i < k; ++i) A.col(i) = s.sw.cwiseProduct(real_kron(s.basis, s.powers(s.terms[i])));
  const RVector lam = solve_ls(A, s.sw.cwiseProduct(s.f));
  if (!lam.allFinite()) return;
  for (int i = 0; i < k; ++i) s.terms[i].lambda = lam(i);
}

std::vector<RankOneTerm> displaced(const State& s, const std::vector<RankOneTerm>& base,
                                   const std::vector<RankOneTerm>& old, double step) {
  const TensorFormat& fmt = s.basis.format();
  std::vector<RankOneTerm> out = base;
  for (std::size_t i = 0; i < base.size(); ++i) {
    RankOneTerm& t = out[i];
    t.lambda = base[i].lambda + step * (base[i].lambda - old[i].lambda);
    for (int l = 0; l < fmt.factors(); ++l) {
      t.vectors[l] = base[i].vectors[l] + step * (base[i].vectors[l] - old[i].vectors[l]);
      normalize_term(t, l, fmt.degree(l));
    }
  }
  return out;
}

// Line search along the displacement of the last sweep, doubling the step while it helps.
void extrapolate(State& s, const std::vector<RankOneTerm>& old, double current) {
  const std::vector<RankOneTerm> base = s.terms;
  std::vector<RankOneTerm> best = base;
  double best_obj = current;
  for (double step = 1.0; step < 1e6; step *= 2.0) {
    s.terms = displaced(s, base, old, step);
    const double obj = s.objective();
    if (!(obj < best_obj * (1.0 - 1e-12))) break;
    best_obj = obj;
    best = s.terms;
  }
  s.terms = best;
}

// Columns: derivatives of the weighted model in every scale and vector coordinate.
RMatrix joint_jacobian(const State& s) {
  const MonomialBasis& b = s.basis;
  const TensorFormat& fmt = b.format();
  int per_term = 1;
  for (int l = 0; l < fmt.factors(); ++l) per_term += fmt.dim(l);
  RMatrix J(b.size(), static_cast<Index>(s.terms.size()) * per_term);
  for (std::size_t i = 0; i < s.terms.size(); ++i) {
    const RankOneTerm& t = s.terms[i];
    const std::vector<RVector> parts = s.powers(t);
    Index c = static_cast<Index>(i) * per_term;
    J.col(c++) = s.sw.cwiseProduct(real_kron(b, parts));
    for (int l = 0; l < fmt.factors(); ++l) {
      std::vector<RVector> q = parts;
      for (int j = 0; j < fmt.dim(l); ++j) {
        q[l] = real_sym_power_derivative(b, l, t.vectors[l], j);
        J.col(c++) = s.sw.cwiseProduct(real_kron(b, q)) * t.lambda;
      }
    }
  }
  return J;
}

// Size of the residual's projection onto the model's tangent directions.
double stationarity(const State& s) {
  const RMatrix J = joint_jacobian(s);
  const RVector r = s.sw.cwiseProduct(s.f - s.model());
  return (J * solve_ls(J, r)).norm();
}

// Damped Gauss-Newton step on all scales and vectors at once; mu adapts between calls.
// Inside the rounding band of the objective a step is kept only if it improves stationarity.
void joint_step(State& s, double& mu) {
  const TensorFormat& fmt = s.basis.format();
  const RVector r = s.sw.cwiseProduct(s.f - s.model());
  const double obj = r.squaredNorm();
  const RMatrix J = joint_jacobian(s);
  const Index n = J.cols();
  const Index per_term = n / static_cast<Index>(s.terms.size());
  const std::vector<RankOneTerm> saved = s.terms;
  double before = -1.0;
  for (int tries = 0; tries < 20; ++tries) {
    RMatrix A(J.rows() + n, n);
    A << J, std::sqrt(mu) * RMatrix::Identity(n, n);
    RVector rhs = RVector::Zero(J.rows() + n);
    rhs.head(J.rows()) = r;
    const RVector delta = solve_ls(A, rhs);
    if (delta.allFinite()) {
      for (std::size_t i = 0; i < s.terms.size(); ++i) {
        RankOneTerm& t = s.terms[i];
        Index c = static_cast<Index>(i) * per_term;
        t.lambda = saved[i].lambda + delta(c++);
        for (int l = 0; l < fmt.factors(); ++l) {
          t.vectors[l] = saved[i].vectors[l] + delta.segment(c, fmt.dim(l));
          c += fmt.dim(l);
          normalize_term(t, l, fmt.degree(l));
        }
      }
      const double after = s.objective();
      bool keep = after < obj * (1.0 - 1e-13);
      if (!keep && after <= obj * (1.0 + 1e-13)) {
        if (before < 0.0) {
          State start = s;
          start.terms = saved;
          before = stationarity(start);
        }
        keep = stationarity(s) < before;
      }
      if (keep) {
        mu = std::max(mu / 3.0, 1e-15);
        return;
      }
    }
    s.terms = saved;
    mu = std::min(mu * 4.0, 1e15);
  }
}

double max_term_norm(const std::vector<RankOneTerm>& terms) {
  double m = 0.0;
  for (const RankOneTerm& t : terms) m = std::max(m, std::abs(t.lambda));
  return m;
}

VectorTuple as_tuple(const RankOneTerm& t) {
  std::vector<CVector> vs;
  for (const RVector& v : t.vectors) vs.push_back(v.cast<cplx>());
  return VectorTuple(std::move(vs));
}

}  // namespace

Tensor terms_tensor(const BasisPtr& basis, const std::vector<RankOneTerm>& terms) {
  CVector g = CVector::Zero(basis->size());
  for (const RankOneTerm& t : terms) g += rank_one(basis, as_tuple(t)).coeffs() * t.lambda;
  return Tensor(basis, std::move(g));
}

double criticality_residual(const Tensor& f, const Tensor& g, const std::vector<RankOneTerm>& terms) {
  const double fn = hermitian_norm(f);
  if (fn == 0.0) return 0.0;
  if (terms.empty()) return 0.0;
  const BasisPtr& basis = f.basis_ptr();
  std::vector<CMatrix> blocks;
  Index cols = 0;
  for (const RankOneTerm& t : terms) {
    blocks.push_back(tangent_span(basis, as_tuple(t)));
    cols += blocks.back().cols();
  }
  CMatrix A(basis->size(), cols);
  Index c = 0;
  for (const CMatrix& blk : blocks) {
    A.middleCols(c, blk.cols()) = blk;
    c += blk.cols();
  }
  const CVector sw = basis->sqrt_weights().cast<cplx>();
  A = sw.asDiagonal() * A;
  const CVector r = (f - g).weighted_coords();
  const LeastSquaresResult ls = least_squares(A, r);
  return (A * ls.x).norm() / fn;
}

std::vector<RankOneTerm> random_terms(const TensorFormat& format, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<RankOneTerm> terms(k);
  for (RankOneTerm& t : terms) {
    t.lambda = 1.0;
    for (int l = 0; l < format.factors(); ++l) {
      RVector v(format.dim(l));
      do {
        for (Index j = 0; j < v.size(); ++j) v(j) = normal(rng);
      } while (v.norm() == 0.0);
      t.vectors.push_back(v / v.norm());
    }
  }
  return terms;
}

AlsResult als_run(const Tensor& f, std::vector<RankOneTerm> start, const AlsConfig& cfg,
                  std::vector<AlsTracePoint>* trace, bool stop_when_critical) {
  if (!f.is_real()) throw InputError("als: f must be real");
  const MonomialBasis& basis = f.basis();
  State s{basis, f.coeffs().real(), basis.sqrt_weights(), std::move(start)};
  const TensorFormat& fmt = basis.format();
  const double fn2 = s.sw.cwiseProduct(s.f).squaredNorm();

  AlsResult res(Tensor(f.basis_ptr()));
  if (!s.terms.empty()) update_scales(s);
  double prev = s.objective();
  double best_crit = std::numeric_limits<double>::infinity();
  int stall = 0;
  int sweep = 0;
  double mu = 1e-3;
  while (sweep < cfg.max_sweeps && !s.terms.empty()) {
    ++sweep;
    const std::vector<RankOneTerm> old = s.terms;
    for (int l = 0; l < fmt.factors(); ++l) {
      if (fmt.degree(l) == 1)
        update_linear_block(s, l);
      else
        update_symmetric_block(s, l);
    }
    update_scales(s);
    double obj = s.objective();
    if (cfg.extrapolate && sweep > 1) {
      extrapolate(s, old, obj);
      joint_step(s, mu);
      obj = s.objective();
    }
    if (trace) trace->push_back({sweep, obj, max_term_norm(s.terms)});
    const double rel = (prev - obj) / std::max(prev, std::numeric_limits<double>::min());
    prev = obj;
    if (obj <= 1e-28 * fn2) break;
    if (stop_when_critical && rel < cfg.rel_decrease) {
      const Tensor g = terms_tensor(f.basis_ptr(), s.terms);
      const double crit = criticality_residual(f, g, s.terms);
      if (crit <= cfg.criticality_target) break;
      if (crit < best_crit * (1.0 - 1e-3)) {
        best_crit = crit;
        stall = 0;
      } else if (++stall >= cfg.stall_sweeps) {
        break;
      }
    }
  }

  res.terms = s.terms;
  res.g = terms_tensor(f.basis_ptr(), s.terms);
  res.objective = hermitian_norm(f - res.g) * hermitian_norm(f - res.g);
  res.criticality_residual = criticality_residual(f, res.g, s.terms);
  res.sweeps = sweep;
  res.max_term_norm = max_term_norm(s.terms);
  return res;
}

AlsResult als_critical_rank_k(const Tensor& f, int k, const AlsConfig& cfg) {
  if (k < 0) throw InputError("als_critical_rank_k: k must be >= 0");
  if (!f.is_real()) throw InputError("als_critical_rank_k: f must be real");
  if (k == 0) {
    AlsResult res(Tensor(f.basis_ptr()));
    const double n = hermitian_norm(f);
    res.objective = n * n;
    return res;
  }
  std::optional<AlsResult> best;
  for (int r = 0; r < std::max(1, cfg.restarts); ++r) {
    const std::uint64_t seed = cfg.seed * 1000003ULL + static_cast<std::uint64_t>(r);
    AlsResult res = als_run(f, random_terms(f.format(), k, seed), cfg);
    res.restart = r;
    if (!best || res.objective < best->objective) best = std::move(res);
  }
  return *best;
}

Tensor w_tensor() {
  const TensorFormat fmt = TensorFormat::ordinary({2, 2, 2});
  CVector c = CVector::Zero(8);
  c(1) = 1.0;  // e1 e1 e2
  c(2) = 1.0;  // e1 e2 e1
  c(4) = 1.0;  // e2 e1 e1
  return Tensor(fmt, c);
}

}  // namespace crit
