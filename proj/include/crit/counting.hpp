#pragma once

// Exact integer combinatorics: the number of critical rank-one tensors of a general f
// (a top Chern class coefficient), Bott's formulas for h^q(P^n, Omega^r(k)), Kunneth
// aggregation and the vanishing dimensions of H^q(wedge^k E^* (x) O(d)).

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "crit/tensor_space.hpp"

namespace crit {

using BigInt = boost::multiprecision::cpp_int;

/// Polynomials in t_1..t_p modulo t_l^{max_l + 1}, dense, exact coefficients.
class IntPoly {
 public:
  explicit IntPoly(std::vector<int> max_exponents);

  static IntPoly constant(std::vector<int> max_exponents, const BigInt& c);
  /// c * t_l
  static IntPoly variable(std::vector<int> max_exponents, int l, const BigInt& c = 1);

  int variables() const { return static_cast<int>(max_.size()); }
  const std::vector<int>& max_exponents() const { return max_; }

  /// Zero for exponents beyond the truncation.
  BigInt coeff(const std::vector<int>& e) const;
  void add_term(const std::vector<int>& e, const BigInt& c);

  IntPoly operator+(const IntPoly& o) const;
  IntPoly operator*(const IntPoly& o) const;
  IntPoly pow(int e) const;
  bool is_zero() const;

 private:
  bool in_range(const std::vector<int>& e) const;
  std::size_t offset(const std::vector<int>& e) const;
  std::vector<int> exponents(std::size_t off) const;
  void check_same(const IntPoly& o) const;

  std::vector<int> max_;
  std::vector<BigInt> coef_;
};

BigInt binomial(long long n, long long k);

/// Coefficient of prod t_l^{n_l} in prod_l sum_{i=0}^{n_l} t_l^i h_l^{n_l - i},
/// h_l = sum_j d_j t_j - t_l.
BigInt count_critical_rank_one(const TensorFormat& format);

/// ((d-1)^{n+1} - 1)/(d - 2) for S^d C^{n+1}; n + 1 when d = 2.
BigInt symmetric_count_closed_form(int d, int n);

/// dim H^q(P^n, Omega^r(k)).
BigInt bott_h(int n, int q, int r, int k);

/// sum over q_1 + ... + q_p = q of prod_l tables[l][q_l] (missing entries are zero).
BigInt kunneth_dim(const std::vector<std::vector<BigInt>>& tables, int q);

/// dim H^q(wedge^k E^* (x) O(d_1, ..., d_p)). k >= 2.
BigInt vanishing_check(const TensorFormat& format, int k, int q);

struct ExpectedCodim {
  long long value = 0;        // sum_l C(n_l + 1, 2)
  long long h0_cross_check = 0;  // sum_l h^0(P^{n_l}, Omega^1(2))
};
/// Throws std::logic_error if the two computations disagree.
ExpectedCodim expected_codim(const TensorFormat& format);

}  // namespace crit
