#include "crit/tensor_space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>

namespace crit {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

cplx ipow(cplx z, int e) {
  cplx r(1.0, 0.0);
  for (int i = 0; i < e; ++i) r *= z;
  return r;
}

// ---------------------------------------------------------------------------
// TensorFormat

TensorFormat::TensorFormat(std::vector<int> degrees, std::vector<int> dims)
    : degrees_(std::move(degrees)), dims_(std::move(dims)) {
  if (degrees_.empty()) throw InputError("TensorFormat: need at least one factor");
  if (degrees_.size() != dims_.size()) throw InputError("TensorFormat: degrees and dims differ in length");
  for (std::size_t l = 0; l < degrees_.size(); ++l) {
    if (degrees_[l] < 1) throw InputError("TensorFormat: degrees must be >= 1");
    if (dims_[l] < 1) throw InputError("TensorFormat: dims must be >= 1");
  }
}

TensorFormat TensorFormat::ordinary(std::vector<int> dims) {
  std::vector<int> degrees(dims.size(), 1);
  return TensorFormat(std::move(degrees), std::move(dims));
}

TensorFormat TensorFormat::symmetric(int degree, int dim) { return TensorFormat({degree}, {dim}); }

int TensorFormat::total_degree() const {
  int D = 0;
  for (int d : degrees_) D += d;
  return D;
}

int TensorFormat::total_proj_dim() const {
  int N = 0;
  for (int m : dims_) N += m - 1;
  return N;
}

namespace {
Index binomial_index(int n, int k) {
  if (k < 0 || k > n) return 0;
  Index r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}
}  // namespace

Index TensorFormat::space_dim() const {
  Index r = 1;
  for (std::size_t l = 0; l < degrees_.size(); ++l) r *= binomial_index(dims_[l] - 1 + degrees_[l], degrees_[l]);
  return r;
}

bool TensorFormat::triangle_ok(int l) const {
  const int N = total_proj_dim();
  const int nl = proj_dim(l);
  return nl <= N - nl;
}

bool TensorFormat::theorem_triangle_ok() const {
  for (int l = 0; l < factors(); ++l)
    if (degrees_[l] == 1 && !triangle_ok(l)) return false;
  return true;
}

bool TensorFormat::all_triangle_ok() const {
  for (int l = 0; l < factors(); ++l)
    if (!triangle_ok(l)) return false;
  return true;
}

int MonomialIndex::degree() const {
  int s = 0;
  for (const auto& a : exponents)
    for (int e : a) s += e;
  return s;
}

// ---------------------------------------------------------------------------
// MonomialBasis

namespace {
void fill_monomials(int remaining, int var, Exponents& cur, std::vector<Exponents>& out) {
  const int dim = static_cast<int>(cur.size());
  if (var == dim - 1) {
    cur[var] = remaining;
    out.push_back(cur);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[var] = e;
    fill_monomials(remaining - e, var + 1, cur, out);
  }
}
}  // namespace

std::vector<Exponents> monomials_of_degree(int degree, int dim) {
  std::vector<Exponents> out;
  if (dim <= 0 || degree < 0) return out;
  Exponents cur(dim, 0);
  fill_monomials(degree, 0, cur, out);
  return out;
}

MonomialBasis::MonomialBasis(const TensorFormat& format) : format_(format) {
  const int p = format.factors();
  local_.resize(p);
  local_weight_.resize(p);
  local_multinomial_.resize(p);
  strides_.assign(p, 1);
  for (int l = 0; l < p; ++l) {
    const int d = format.degree(l);
    local_[l] = monomials_of_degree(d, format.dim(l));
    for (const Exponents& a : local_[l]) {
      double afact = 1.0;
      for (int e : a) afact *= factorial(e);
      local_weight_[l].push_back(afact / factorial(d));
      local_multinomial_[l].push_back(factorial(d) / afact);
    }
  }
  size_ = 1;
  for (int l = p - 1; l >= 0; --l) {
    strides_[l] = size_;
    size_ *= static_cast<Index>(local_[l].size());
  }
  weights_.resize(size_);
  for (Index pos = 0; pos < size_; ++pos) {
    double w = 1.0;
    for (int l = 0; l < p; ++l) w *= local_weight_[l][local_index(pos, l)];
    weights_(pos) = w;
  }
  sqrt_weights_ = weights_.cwiseSqrt();
}

std::shared_ptr<const MonomialBasis> MonomialBasis::make(const TensorFormat& format) {
  // Bases are immutable; share one instance per format.
  static std::mutex mu;
  static std::map<std::pair<std::vector<int>, std::vector<int>>, std::weak_ptr<const MonomialBasis>> cache;
  const auto key = std::make_pair(format.degrees(), format.dims());
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(key); it != cache.end())
    if (auto sp = it->second.lock()) return sp;
  std::shared_ptr<const MonomialBasis> sp(new MonomialBasis(format));
  cache[key] = sp;
  return sp;
}

MonomialIndex MonomialBasis::monomial(Index pos) const {
  if (pos < 0 || pos >= size_) throw InputError("MonomialBasis::monomial: position out of range");
  MonomialIndex m;
  for (int l = 0; l < format_.factors(); ++l) m.exponents.push_back(local_[l][local_index(pos, l)]);
  return m;
}

int MonomialBasis::local_lookup(int l, const Exponents& a) const {
  const auto& list = local_.at(l);
  // descending lexicographic order
  auto it = std::lower_bound(list.begin(), list.end(), a, std::greater<>());
  if (it == list.end() || *it != a) return -1;
  return static_cast<int>(it - list.begin());
}

Index MonomialBasis::position(const MonomialIndex& m) const {
  if (static_cast<int>(m.exponents.size()) != format_.factors())
    throw InputError("MonomialBasis::position: factor count mismatch");
  Index pos = 0;
  for (int l = 0; l < format_.factors(); ++l) {
    const int k = local_lookup(l, m.exponents[l]);
    if (k < 0) throw InputError("MonomialBasis::position: exponent vector does not match the format");
    pos += k * strides_[l];
  }
  return pos;
}

CVector MonomialBasis::kron(std::span<const CVector> per_factor) const {
  const int p = format_.factors();
  if (static_cast<int>(per_factor.size()) != p) throw InputError("kron: factor count mismatch");
  CVector out(size_);
  for (Index pos = 0; pos < size_; ++pos) {
    cplx v(1.0, 0.0);
    for (int l = 0; l < p; ++l) v *= per_factor[l](local_index(pos, l));
    out(pos) = v;
  }
  return out;
}

std::vector<MonomialIndex> monomial_basis(const TensorFormat& format) {
  const auto basis = MonomialBasis::make(format);
  std::vector<MonomialIndex> out;
  out.reserve(basis->size());
  for (Index pos = 0; pos < basis->size(); ++pos) out.push_back(basis->monomial(pos));
  return out;
}

// ---------------------------------------------------------------------------
// Tensor

Tensor::Tensor(BasisPtr basis) : basis_(std::move(basis)) {
  if (!basis_) throw InputError("Tensor: null basis");
  coeffs_ = CVector::Zero(basis_->size());
}

Tensor::Tensor(BasisPtr basis, CVector coeffs) : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  if (!basis_) throw InputError("Tensor: null basis");
  if (coeffs_.size() != basis_->size()) throw InputError("Tensor: coefficient count does not match dim T");
  require_finite(coeffs_, "Tensor");
}

Tensor Tensor::from_weighted_coords(BasisPtr basis, const CVector& y) {
  CVector c = y.cwiseQuotient(basis->sqrt_weights().cast<cplx>());
  return Tensor(std::move(basis), std::move(c));
}

bool Tensor::is_real(double tol) const {
  for (Index i = 0; i < coeffs_.size(); ++i)
    if (std::abs(coeffs_(i).imag()) > tol) return false;
  return true;
}

namespace {
void require_same_format(const Tensor& a, const Tensor& b, const char* what) {
  if (a.format() != b.format()) throw InputError(std::string(what) + ": format mismatch");
}
}  // namespace

Tensor Tensor::operator+(const Tensor& o) const {
  require_same_format(*this, o, "Tensor::operator+");
  return Tensor(basis_, coeffs_ + o.coeffs_);
}

Tensor Tensor::operator-(const Tensor& o) const {
  require_same_format(*this, o, "Tensor::operator-");
  return Tensor(basis_, coeffs_ - o.coeffs_);
}

Tensor Tensor::operator*(cplx s) const { return Tensor(basis_, coeffs_ * s); }

// ---------------------------------------------------------------------------
// VectorTuple

VectorTuple::VectorTuple(std::vector<CVector> vectors) : vectors_(std::move(vectors)) {
  for (const CVector& v : vectors_) {
    require_finite(v, "VectorTuple");
    if (v.size() == 0 || v.isZero(0.0)) throw InputError("VectorTuple: zero vector");
  }
}

cplx VectorTuple::quadratic_value(int l) const {
  const CVector& v = vectors_.at(l);
  return (v.transpose() * v)(0, 0);
}

bool VectorTuple::is_isotropic(int l, double iso_tol) const {
  return std::abs(quadratic_value(l)) <= iso_tol * vectors_.at(l).squaredNorm();
}

bool VectorTuple::any_isotropic(double iso_tol) const {
  for (int l = 0; l < factors(); ++l)
    if (is_isotropic(l, iso_tol)) return true;
  return false;
}

VectorTuple VectorTuple::with(int l, CVector v) const {
  std::vector<CVector> vs = vectors_;
  vs.at(l) = std::move(v);
  return VectorTuple(std::move(vs));
}

VectorTuple VectorTuple::normalized() const {
  std::vector<CVector> vs;
  vs.reserve(vectors_.size());
  for (const CVector& v : vectors_) {
    CVector u = v / v.norm();
    // First coordinate that is not negligible fixes the phase.
    const double big = u.cwiseAbs().maxCoeff();
    for (Index i = 0; i < u.size(); ++i) {
      if (std::abs(u(i)) > 1e-8 * big) {
        u *= std::conj(u(i)) / std::abs(u(i));
        u(i) = cplx(u(i).real(), 0.0);
        break;
      }
    }
    vs.push_back(std::move(u));
  }
  return VectorTuple(std::move(vs));
}

// ---------------------------------------------------------------------------
// Bilinear form, rank-one points, contractions

cplx inner(const Tensor& f, const Tensor& g) {
  require_same_format(f, g, "inner");
  const RVector& w = f.basis().weights();
  const CVector& a = f.coeffs();
  const CVector& b = g.coeffs();
  cplx s(0.0, 0.0);
  // Products are formed as a*b in this order so that inner(f,g) == inner(g,f) bitwise.
  for (Index i = 0; i < a.size(); ++i) s += w(i) * (a(i) * b(i));
  return s;
}

double hermitian_norm(const Tensor& f) { return f.weighted_coords().norm(); }

namespace {

void require_tuple_matches(const TensorFormat& fmt, const VectorTuple& t, const char* what) {
  if (t.factors() != fmt.factors()) throw InputError(std::string(what) + ": tuple has wrong factor count");
  for (int l = 0; l < fmt.factors(); ++l)
    if (t[l].size() != fmt.dim(l)) throw InputError(std::string(what) + ": vector length does not match dim V_l");
}

// v^a for every monomial of factor l (no multinomial factor).
CVector monomial_values(const MonomialBasis& b, int l, const CVector& v) {
  const int K = b.factor_size(l);
  CVector out(K);
  for (int k = 0; k < K; ++k) {
    const Exponents& a = b.local_exponents(l, k);
    cplx r(1.0, 0.0);
    for (std::size_t j = 0; j < a.size(); ++j) r *= ipow(v(j), a[j]);
    out(k) = r;
  }
  return out;
}

// Coefficients of v^d in S^d V.
CVector sym_power(const MonomialBasis& b, int l, const CVector& v) {
  CVector vals = monomial_values(b, l, v);
  for (int k = 0; k < b.factor_size(l); ++k) vals(k) *= b.local_multinomial(l, k);
  return vals;
}

// Coefficients of v^{d-1} e_j in S^d V: (1/d) multinomial(d;a) a_j v^{a - e_j}.
CVector sym_power_with(const MonomialBasis& b, int l, const CVector& v, int j) {
  const int K = b.factor_size(l);
  const int d = b.format().degree(l);
  CVector out(K);
  for (int k = 0; k < K; ++k) {
    const Exponents& a = b.local_exponents(l, k);
    if (a[j] == 0) {
      out(k) = 0.0;
      continue;
    }
    cplx r(b.local_multinomial(l, k) * a[j] / d, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) r *= ipow(v(i), a[i] - (static_cast<int>(i) == j ? 1 : 0));
    out(k) = r;
  }
  return out;
}

}  // namespace

Tensor rank_one(const BasisPtr& basis, const VectorTuple& t) {
  require_tuple_matches(basis->format(), t, "rank_one");
  std::vector<CVector> parts;
  for (int l = 0; l < t.factors(); ++l) parts.push_back(sym_power(*basis, l, t[l]));
  return Tensor(basis, basis->kron(parts));
}

CVector contract(const Tensor& f, const VectorTuple& t, int l) {
  const MonomialBasis& b = f.basis();
  const TensorFormat& fmt = b.format();
  if (l < 0 || l >= fmt.factors()) throw InputError("contract: factor index out of range");
  require_tuple_matches(fmt, t, "contract");

  const int p = fmt.factors();
  const int m = fmt.dim(l);
  const int d = fmt.degree(l);
  std::vector<CVector> vals(p);
  for (int i = 0; i < p; ++i)
    if (i != l) vals[i] = monomial_values(b, i, t[i]);

  // dvals(k, j) = a_j v^{a - e_j}: the partial derivatives of the factor-l monomials.
  const int K = b.factor_size(l);
  CMatrix dvals = CMatrix::Zero(K, m);
  for (int k = 0; k < K; ++k) {
    const Exponents& a = b.local_exponents(l, k);
    for (int j = 0; j < m; ++j) {
      if (a[j] == 0) continue;
      cplx r(a[j], 0.0);
      for (int i = 0; i < m; ++i) r *= ipow(t[l](i), a[i] - (i == j ? 1 : 0));
      dvals(k, j) = r;
    }
  }

  CVector u = CVector::Zero(m);
  const CVector& c = f.coeffs();
  for (Index pos = 0; pos < b.size(); ++pos) {
    if (c(pos) == cplx(0.0, 0.0)) continue;
    cplx rest = c(pos);
    for (int i = 0; i < p; ++i)
      if (i != l) rest *= vals[i](b.local_index(pos, i));
    u += rest * dvals.row(b.local_index(pos, l)).transpose();
  }
  return u / static_cast<double>(d);
}

CMatrix tangent_span(const BasisPtr& basis, const VectorTuple& t) {
  const TensorFormat& fmt = basis->format();
  require_tuple_matches(fmt, t, "tangent_span");
  const int p = fmt.factors();
  std::vector<CVector> powers(p);
  for (int l = 0; l < p; ++l) powers[l] = sym_power(*basis, l, t[l]);

  int cols = 0;
  for (int l = 0; l < p; ++l) cols += fmt.dim(l);
  CMatrix out(basis->size(), cols);
  int c = 0;
  for (int l = 0; l < p; ++l) {
    for (int j = 0; j < fmt.dim(l); ++j) {
      std::vector<CVector> parts = powers;
      parts[l] = sym_power_with(*basis, l, t[l], j);
      out.col(c++) = basis->kron(parts);
    }
  }
  return out;
}

GcdResult monomial_gcd(const MonomialIndex& m1, const MonomialIndex& m2) {
  if (m1.exponents.size() != m2.exponents.size()) throw InputError("monomial_gcd: format mismatch");
  GcdResult out;
  for (std::size_t l = 0; l < m1.exponents.size(); ++l) {
    const Exponents& a = m1.exponents[l];
    const Exponents& b = m2.exponents[l];
    if (a.size() != b.size()) throw InputError("monomial_gcd: format mismatch");
    Exponents g(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
      g[j] = std::min(a[j], b[j]);
      out.degree += g[j];
    }
    out.gcd.exponents.push_back(std::move(g));
  }
  return out;
}

Tensor random_tensor(const TensorFormat& format, std::uint64_t seed, bool real_only) {
  const auto basis = MonomialBasis::make(format);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector c(basis->size());
  for (Index i = 0; i < c.size(); ++i) {
    if (real_only) {
      c(i) = cplx(normal(rng), 0.0);
    } else {
      const double re = normal(rng);
      const double im = normal(rng);
      c(i) = cplx(re, im) / std::sqrt(2.0);
    }
  }
  return Tensor(basis, std::move(c));
}

}  // namespace crit
