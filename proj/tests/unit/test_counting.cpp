#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "crit/counting.hpp"

using namespace crit;

TEST(Binomial, Values) {
  EXPECT_EQ(binomial(5, 2), 10);
  EXPECT_EQ(binomial(5, 0), 1);
  EXPECT_EQ(binomial(5, 6), 0);
  EXPECT_EQ(binomial(5, -1), 0);
  EXPECT_EQ(binomial(60, 30), BigInt("118264581564861424"));
}

TEST(IntPoly, TruncatedArithmetic) {
  const std::vector<int> mx{2, 1};
  const IntPoly t1 = IntPoly::variable(mx, 0), t2 = IntPoly::variable(mx, 1);
  const IntPoly one = IntPoly::constant(mx, 1);
  const IntPoly p = (one + t1 + t2).pow(3);
  // (1 + a + b)^3 mod a^3, b^2
  EXPECT_EQ(p.coeff({0, 0}), 1);
  EXPECT_EQ(p.coeff({1, 0}), 3);
  EXPECT_EQ(p.coeff({2, 0}), 3);
  EXPECT_EQ(p.coeff({1, 1}), 6);
  EXPECT_EQ(p.coeff({2, 1}), 3);
  EXPECT_EQ(p.coeff({0, 2}), 0);
  EXPECT_EQ(p.coeff({3, 0}), 0);
  EXPECT_TRUE((t2 * t2).is_zero());
  EXPECT_THROW(t1 + IntPoly::variable({1, 1}, 0), InputError);
}

TEST(Count, PrintedExamples) {
  EXPECT_EQ(count_critical_rank_one(TensorFormat::ordinary({2, 2})), 2);
  EXPECT_EQ(count_critical_rank_one(TensorFormat::ordinary({2, 2, 2})), 6);
  EXPECT_EQ(count_critical_rank_one(TensorFormat::symmetric(3, 2)), 3);
  EXPECT_EQ(count_critical_rank_one(TensorFormat::ordinary({2, 2, 4})), 8);
  EXPECT_EQ(count_critical_rank_one(TensorFormat::ordinary({3, 3, 3})), 37);
}

TEST(Count, MatricesGiveMinDimension) {
  for (int m = 1; m <= 8; ++m)
    for (int n = 1; n <= 8; ++n) EXPECT_EQ(count_critical_rank_one(TensorFormat::ordinary({m, n})), std::min(m, n));
}

// Closed form computed two ways: the formula, and sum_{i<=n} (d-1)^i.
TEST(Count, SymmetricClosedForm) {
  for (int d = 1; d <= 7; ++d)
    for (int n = 0; n <= 5; ++n) {
      BigInt geometric = 0, pw = 1;
      for (int i = 0; i <= n; ++i, pw *= d - 1) geometric += pw;
      EXPECT_EQ(symmetric_count_closed_form(d, n), geometric);
      EXPECT_EQ(count_critical_rank_one(TensorFormat::symmetric(d, n + 1)), geometric) << d << " " << n;
    }
  EXPECT_THROW(symmetric_count_closed_form(0, 1), InputError);
}

TEST(Count, PermutationInvariant) {
  const std::vector<int> deg{2, 1, 3}, dim{3, 2, 2};
  std::vector<int> perm{0, 1, 2};
  const BigInt base = count_critical_rank_one(TensorFormat(deg, dim));
  do {
    std::vector<int> d2, m2;
    for (int i : perm) {
      d2.push_back(deg[i]);
      m2.push_back(dim[i]);
    }
    EXPECT_EQ(count_critical_rank_one(TensorFormat(d2, m2)), base);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST(Count, OneDimensionalFactorsAreInert) {
  EXPECT_EQ(count_critical_rank_one(TensorFormat({2, 1}, {3, 1})), count_critical_rank_one(TensorFormat::symmetric(2, 3)));
  EXPECT_EQ(count_critical_rank_one(TensorFormat::ordinary({1, 1})), 1);
}

TEST(Bott, PrintedCases) {
  EXPECT_EQ(bott_h(2, 0, 1, 2), 3);
  EXPECT_EQ(bott_h(1, 1, 1, 0), 1);
  EXPECT_EQ(bott_h(2, 2, 0, -3), 1);
  EXPECT_EQ(bott_h(3, 1, 2, 5), 0);
  // h^0(P^n, O(k)) = C(n+k, n)
  for (int n = 0; n <= 5; ++n)
    for (int k = 1; k <= 6; ++k) EXPECT_EQ(bott_h(n, 0, 0, k), binomial(n + k, n));
  EXPECT_THROW(bott_h(-1, 0, 0, 0), InputError);
}

TEST(Bott, SerreSymmetry) {
  for (int n = 0; n <= 6; ++n)
    for (int q = 0; q <= n; ++q)
      for (int r = 0; r <= n; ++r)
        for (int k = -12; k <= 12; ++k) EXPECT_EQ(bott_h(n, q, r, k), bott_h(n, n - q, n - r, -k)) << n << q << r << k;
}

// chi(O(k)) = (k+1)...(k+n)/n! for every k.
TEST(Bott, EulerCharacteristicOfLineBundles) {
  for (int n = 1; n <= 5; ++n)
    for (int k = -10; k <= 10; ++k) {
      BigInt chi = 0;
      for (int q = 0; q <= n; ++q) chi += (q % 2 ? -1 : 1) * bott_h(n, q, 0, k);
      BigInt want = 1;
      for (int i = 1; i <= n; ++i) want = want * (k + i);
      for (int i = 1; i <= n; ++i) want /= i;
      EXPECT_EQ(chi, want) << n << " " << k;
    }
}

TEST(Kunneth, Convolution) {
  const std::vector<BigInt> a{2, 3}, b{5, 7}, one{1, 0, 0};
  EXPECT_EQ(kunneth_dim({a}, 1), 3);
  EXPECT_EQ(kunneth_dim({a}, 4), 0);
  EXPECT_EQ(kunneth_dim({one, one}, 0), 1);
  EXPECT_EQ(kunneth_dim({one, one}, 1), 0);
  EXPECT_EQ(kunneth_dim({a, b}, 0), 10);
  EXPECT_EQ(kunneth_dim({a, b}, 1), 2 * 7 + 3 * 5);
  EXPECT_EQ(kunneth_dim({a, b}, 2), 21);
}

namespace {

std::vector<TensorFormat> small_formats(int max_n) {
  std::vector<TensorFormat> out;
  for (int p = 1; p <= 3; ++p) {
    std::vector<int> n(p, 1), d(p, 1);
    std::function<void(int)> rec = [&](int l) {
      if (l == p) {
        int N = 0;
        std::vector<int> dims;
        for (int i = 0; i < p; ++i) {
          N += n[i];
          dims.push_back(n[i] + 1);
        }
        if (N <= max_n) out.emplace_back(d, dims);
        return;
      }
      for (n[l] = 1; n[l] <= max_n; ++n[l])
        for (d[l] = 1; d[l] <= 3; ++d[l]) rec(l + 1);
    };
    rec(0);
  }
  return out;
}

}  // namespace

TEST(Vanishing, AllTriangleFormats) {
  int checked = 0;
  for (const TensorFormat& fmt : small_formats(6)) {
    if (!fmt.all_triangle_ok()) continue;
    ++checked;
    const int N = fmt.total_proj_dim();
    for (int k = 2; k <= N; ++k)
      for (int q = 0; q < k; ++q) EXPECT_EQ(vanishing_check(fmt, k, q), 0) << k << " " << q;
  }
  EXPECT_GT(checked, 50);
}

TEST(Vanishing, FailsForTwoByTwoByFour) {
  const TensorFormat fmt = TensorFormat::ordinary({2, 2, 4});
  bool nonzero = false;
  for (int k = 2; k <= fmt.total_proj_dim(); ++k)
    for (int q = 0; q < k; ++q) nonzero = nonzero || vanishing_check(fmt, k, q) != 0;
  EXPECT_TRUE(nonzero);
  EXPECT_EQ(vanishing_check(TensorFormat::ordinary({2, 2, 2}), 2, 0), 0);
  EXPECT_EQ(vanishing_check(TensorFormat::ordinary({2, 2, 2}), 2, 1), 0);
  EXPECT_THROW(vanishing_check(fmt, 1, 0), InputError);
}

TEST(ExpectedCodim, Values) {
  EXPECT_EQ(expected_codim(TensorFormat::ordinary({2, 2, 2})).value, 3);
  EXPECT_EQ(expected_codim(TensorFormat::ordinary({2, 2, 4})).value, 8);
  for (int m = 1; m <= 6; ++m)
    for (int n = 1; n <= 6; ++n)
      EXPECT_EQ(expected_codim(TensorFormat::ordinary({m, n})).value, (m * (m - 1) + n * (n - 1)) / 2);
  for (int n = 0; n <= 10; ++n) {
    const ExpectedCodim e = expected_codim(TensorFormat::symmetric(2, n + 1));
    EXPECT_EQ(e.value, e.h0_cross_check);
    EXPECT_EQ(e.value, (n + 1) * n / 2);
  }
}
