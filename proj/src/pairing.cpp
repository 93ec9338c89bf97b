#include "crit/pairing.hpp"

#include <cassert>

namespace crit {

AntisymElement::AntisymElement(int factor, int dim)
    : factor_(factor), dim_(dim), upper_(CVector::Zero(pair_count(dim))) {}

int AntisymElement::slot(int a, int b) const {
  assert(a < b);
  // pairs (0,1),(0,2),...,(0,m-1),(1,2),...
  return a * dim_ - a * (a + 1) / 2 + (b - a - 1);
}

cplx AntisymElement::at(int a, int b) const {
  if (a == b) return 0.0;
  return a < b ? upper_(slot(a, b)) : -upper_(slot(b, a));
}

void AntisymElement::add(int a, int b, cplx value) {
  if (a == b) return;
  if (a < b)
    upper_(slot(a, b)) += value;
  else
    upper_(slot(b, a)) -= value;
}

CMatrix AntisymElement::matrix() const {
  CMatrix M = CMatrix::Zero(dim_, dim_);
  for (int a = 0; a < dim_; ++a)
    for (int b = a + 1; b < dim_; ++b) {
      M(a, b) = upper_(slot(a, b));
      M(b, a) = -M(a, b);
    }
  return M;
}

AntisymElement AntisymElement::operator+(const AntisymElement& o) const {
  if (o.dim_ != dim_) throw InputError("AntisymElement: dimension mismatch");
  AntisymElement r = *this;
  r.upper_ += o.upper_;
  return r;
}

AntisymElement AntisymElement::operator*(cplx s) const {
  AntisymElement r = *this;
  r.upper_ *= s;
  return r;
}

AntisymElement wedge(const CVector& u, const CVector& v, int factor) {
  if (u.size() != v.size()) throw InputError("wedge: length mismatch");
  const int m = static_cast<int>(u.size());
  AntisymElement w(factor, m);
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) w.add(a, b, u(a) * v(b) - u(b) * v(a));
  return w;
}

std::vector<std::vector<PairNeighbour>> pair_neighbours(const MonomialBasis& basis, int l) {
  const int d = basis.format().degree(l);
  const int m = basis.format().dim(l);
  const double denom = d * factorial(d);
  std::vector<std::vector<PairNeighbour>> table(basis.factor_size(l));
  for (int k = 0; k < basis.factor_size(l); ++k) {
    const Exponents& alpha = basis.local_exponents(l, k);
    double afact = 1.0;
    for (int e : alpha) afact *= factorial(e);
    for (int a = 0; a < m; ++a) {
      if (alpha[a] == 0) continue;
      for (int b = 0; b < m; ++b) {
        if (b == a) continue;
        Exponents beta = alpha;
        --beta[a];
        ++beta[b];
        // gcd = alpha - e_a, so (g_a+1)(g_b+1) g! = alpha_a (alpha_b+1) alpha!/alpha_a
        const double coef = (alpha[b] + 1) * afact / denom;
        table[k].push_back({a, b, basis.local_lookup(l, beta), coef});
      }
    }
  }
  return table;
}

AntisymElement pair_monomials(const TensorFormat& format, const MonomialIndex& m1, const MonomialIndex& m2, int l) {
  const int p = format.factors();
  if (l < 0 || l >= p) throw InputError("pair_monomials: factor index out of range");
  if (static_cast<int>(m1.exponents.size()) != p || static_cast<int>(m2.exponents.size()) != p)
    throw InputError("pair_monomials: format mismatch");
  for (int i = 0; i < p; ++i) {
    const int di = format.degree(i);
    for (const MonomialIndex* mm : {&m1, &m2}) {
      const Exponents& e = mm->exponents[i];
      if (static_cast<int>(e.size()) != format.dim(i)) throw InputError("pair_monomials: format mismatch");
      int s = 0;
      for (int x : e) s += x;
      if (s != di) throw InputError("pair_monomials: exponent sum does not match degree");
    }
  }

  const int m = format.dim(l);
  AntisymElement out(l, m);
  double w_rest = 1.0;
  for (int i = 0; i < p; ++i) {
    if (i == l) continue;
    if (m1.exponents[i] != m2.exponents[i]) return out;
    double afact = 1.0;
    for (int e : m1.exponents[i]) afact *= factorial(e);
    w_rest *= afact / factorial(format.degree(i));
  }

  const Exponents& alpha = m1.exponents[l];
  const Exponents& beta = m2.exponents[l];
  int gdeg = 0;
  int a = -1;
  int b = -1;
  Exponents gamma(m);
  for (int j = 0; j < m; ++j) {
    gamma[j] = std::min(alpha[j], beta[j]);
    gdeg += gamma[j];
    if (alpha[j] > gamma[j]) a = j;
    if (beta[j] > gamma[j]) b = j;
  }
  const int d = format.degree(l);
  if (gdeg != d - 1) return out;

  double gfact = 1.0;
  for (int e : gamma) gfact *= factorial(e);
  const double coef = (gamma[a] + 1) * (gamma[b] + 1) * gfact / (d * factorial(d));
  out.add(a, b, w_rest * coef);
  return out;
}

AntisymElement pair_ell(const Tensor& f, const Tensor& g, int l) {
  if (f.format() != g.format()) throw InputError("pair_ell: format mismatch");
  const MonomialBasis& basis = f.basis();
  if (l < 0 || l >= basis.format().factors()) throw InputError("pair_ell: factor index out of range");

  const auto table = pair_neighbours(basis, l);
  const Index stride = basis.stride(l);
  AntisymElement out(l, basis.format().dim(l));
  const CVector& fc = f.coeffs();
  const CVector& gc = g.coeffs();
  // Each unordered monomial pair once, so that [f|f] vanishes exactly.
  for (Index pos = 0; pos < basis.size(); ++pos) {
    const int k = basis.local_index(pos, l);
    const double w_rest = basis.weight(pos) / basis.local_weight(l, k);
    for (const PairNeighbour& nb : table[k]) {
      if (nb.other < k) continue;
      const Index other = pos + (static_cast<Index>(nb.other) - k) * stride;
      out.add(nb.a, nb.b, (w_rest * nb.coef) * (fc(pos) * gc(other) - fc(other) * gc(pos)));
    }
  }
  return out;
}

AntisymElement pair_rank_one(const Tensor& f, const VectorTuple& t, int l) {
  return wedge(contract(f, t, l), t[l], l);
}

Tensor binary_D(const Tensor& f) {
  const TensorFormat& fmt = f.format();
  if (fmt.factors() != 1 || fmt.dim(0) != 2) throw InputError("binary_D: needs a binary form (p = 1, dim V = 2)");
  const int d = fmt.degree(0);
  // basis order: x^d, x^{d-1}y, ..., y^d; c_k is the coefficient of x^{d-k} y^k
  const CVector& c = f.coeffs();
  CVector out = CVector::Zero(d + 1);
  for (int k = 0; k <= d; ++k) {
    if (k + 1 <= d) out(k) += static_cast<double>(k + 1) * c(k + 1);
    if (k - 1 >= 0) out(k) -= static_cast<double>(d - k + 1) * c(k - 1);
  }
  return Tensor(f.basis_ptr(), std::move(out));
}

}  // namespace crit
