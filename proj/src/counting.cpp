#include "crit/counting.hpp"

#include <functional>
#include <stdexcept>

namespace crit {

IntPoly::IntPoly(std::vector<int> max_exponents) : max_(std::move(max_exponents)) {
  std::size_t n = 1;
  for (int m : max_) {
    if (m < 0) throw InputError("IntPoly: negative truncation bound");
    n *= static_cast<std::size_t>(m + 1);
  }
  coef_.assign(n, BigInt(0));
}

IntPoly IntPoly::constant(std::vector<int> max_exponents, const BigInt& c) {
  IntPoly p(std::move(max_exponents));
  p.coef_[0] = c;
  return p;
}

IntPoly IntPoly::variable(std::vector<int> max_exponents, int l, const BigInt& c) {
  IntPoly p(std::move(max_exponents));
  std::vector<int> e(p.variables(), 0);
  e.at(l) = 1;
  p.add_term(e, c);
  return p;
}

bool IntPoly::in_range(const std::vector<int>& e) const {
  if (e.size() != max_.size()) throw InputError("IntPoly: exponent length mismatch");
  for (std::size_t l = 0; l < e.size(); ++l)
    if (e[l] < 0 || e[l] > max_[l]) return false;
  return true;
}

std::size_t IntPoly::offset(const std::vector<int>& e) const {
  std::size_t off = 0;
  for (std::size_t l = 0; l < e.size(); ++l) off = off * (max_[l] + 1) + e[l];
  return off;
}

std::vector<int> IntPoly::exponents(std::size_t off) const {
  std::vector<int> e(max_.size());
  for (std::size_t l = max_.size(); l-- > 0;) {
    e[l] = static_cast<int>(off % (max_[l] + 1));
    off /= (max_[l] + 1);
  }
  return e;
}

void IntPoly::check_same(const IntPoly& o) const {
  if (max_ != o.max_) throw InputError("IntPoly: truncation mismatch");
}

BigInt IntPoly::coeff(const std::vector<int>& e) const { return in_range(e) ? coef_[offset(e)] : BigInt(0); }

void IntPoly::add_term(const std::vector<int>& e, const BigInt& c) {
  if (in_range(e)) coef_[offset(e)] += c;
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
  check_same(o);
  IntPoly r = *this;
  for (std::size_t i = 0; i < coef_.size(); ++i) r.coef_[i] += o.coef_[i];
  return r;
}

IntPoly IntPoly::operator*(const IntPoly& o) const {
  check_same(o);
  IntPoly r(max_);
  std::vector<int> e(max_.size());
  for (std::size_t i = 0; i < coef_.size(); ++i) {
    if (coef_[i] == 0) continue;
    const std::vector<int> a = exponents(i);
    for (std::size_t j = 0; j < o.coef_.size(); ++j) {
      if (o.coef_[j] == 0) continue;
      const std::vector<int> b = o.exponents(j);
      bool keep = true;
      for (std::size_t l = 0; l < max_.size() && keep; ++l) {
        e[l] = a[l] + b[l];
        keep = e[l] <= max_[l];
      }
      if (keep) r.coef_[offset(e)] += coef_[i] * o.coef_[j];
    }
  }
  return r;
}

IntPoly IntPoly::pow(int e) const {
  if (e < 0) throw InputError("IntPoly::pow: negative exponent");
  IntPoly r = constant(max_, 1);
  for (int i = 0; i < e; ++i) r = r * *this;
  return r;
}

bool IntPoly::is_zero() const {
  for (const BigInt& c : coef_)
    if (c != 0) return false;
  return true;
}

BigInt binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

BigInt count_critical_rank_one(const TensorFormat& format) {
  const int p = format.factors();
  std::vector<int> bounds(p);
  for (int l = 0; l < p; ++l) bounds[l] = format.proj_dim(l);

  IntPoly total = IntPoly::constant(bounds, 1);
  for (int l = 0; l < p; ++l) {
    IntPoly h(bounds);
    for (int j = 0; j < p; ++j) h = h + IntPoly::variable(bounds, j, format.degree(j) - (j == l ? 1 : 0));
    const IntPoly t = IntPoly::variable(bounds, l);
    IntPoly c(bounds);
    for (int i = 0; i <= bounds[l]; ++i) c = c + t.pow(i) * h.pow(bounds[l] - i);
    total = total * c;
  }
  return total.coeff(bounds);
}

BigInt symmetric_count_closed_form(int d, int n) {
  if (d < 1 || n < 0) throw InputError("symmetric_count_closed_form: need d >= 1, n >= 0");
  if (d == 2) return n + 1;
  BigInt num = boost::multiprecision::pow(BigInt(d - 1), n + 1) - 1;
  return num / (d - 2);
}

BigInt bott_h(int n, int q, int r, int k) {
  if (n < 0 || q < 0 || r < 0) throw InputError("bott_h: n, q, r must be >= 0");
  if (q == 0 && r <= n && k > r) return binomial(k + n - r, k) * binomial(k - 1, r);
  if (q == r && r <= n && k == 0) return 1;
  if (q == n && r <= n && k < r - n) return binomial(-k + r, -k) * binomial(-k - 1, n - r);
  return 0;
}

BigInt kunneth_dim(const std::vector<std::vector<BigInt>>& tables, int q) {
  if (q < 0) return 0;
  std::vector<BigInt> acc{1};
  for (const auto& t : tables) {
    std::vector<BigInt> next(acc.size() + (t.empty() ? 0 : t.size() - 1), BigInt(0));
    if (t.empty()) return 0;
    for (std::size_t i = 0; i < acc.size(); ++i)
      for (std::size_t j = 0; j < t.size(); ++j) next[i + j] += acc[i] * t[j];
    acc = std::move(next);
  }
  return static_cast<std::size_t>(q) < acc.size() ? acc[q] : BigInt(0);
}

BigInt vanishing_check(const TensorFormat& format, int k, int q) {
  if (k < 2) throw InputError("vanishing_check: k must be >= 2");
  if (q < 0) throw InputError("vanishing_check: q must be >= 0");
  const int p = format.factors();
  BigInt total = 0;
  std::vector<int> r(p, 0);
  std::function<void(int, int)> rec = [&](int l, int left) {
    if (l == p) {
      if (left != 0) return;
      std::vector<std::vector<BigInt>> tables(p);
      for (int i = 0; i < p; ++i) {
        const int n = format.proj_dim(i);
        const int twist = -format.degree(i) * (k - 1) + 2 * r[i];
        for (int qi = 0; qi <= n; ++qi) tables[i].push_back(bott_h(n, qi, r[i], twist));
      }
      total += kunneth_dim(tables, q);
      return;
    }
    for (int v = 0; v <= std::min(left, format.proj_dim(l)); ++v) {
      r[l] = v;
      rec(l + 1, left - v);
    }
    r[l] = 0;
  };
  rec(0, k);
  return total;
}

ExpectedCodim expected_codim(const TensorFormat& format) {
  ExpectedCodim out;
  for (int l = 0; l < format.factors(); ++l) {
    const int n = format.proj_dim(l);
    out.value += static_cast<long long>(n + 1) * n / 2;
    out.h0_cross_check += bott_h(n, 0, 1, 2).convert_to<long long>();
  }
  if (out.value != out.h0_cross_check) throw std::logic_error("expected_codim: Bott cross-check disagrees");
  return out;
}

}  // namespace crit
