#include <gtest/gtest.h>

#include <algorithm>

#include "crit/critical_solver.hpp"
#include "crit/homotopy.hpp"
#include "oracles.hpp"

using namespace crit;

namespace {

// z1^2 + z2^2 - 5, z1 z2 - 2: four regular roots (+-1, +-2), (+-2, +-1).
class Circle : public PolynomialSystem {
 public:
  int size() const override { return 2; }
  std::vector<int> degrees() const override { return {2, 2}; }
  void evaluate(const CVector& z, CVector& v, CMatrix* J) const override {
    v.resize(2);
    v << z(0) * z(0) + z(1) * z(1) - 5.0, z(0) * z(1) - 2.0;
    if (J) {
      J->resize(2, 2);
      *J << 2.0 * z(0), 2.0 * z(1), z(1), z(0);
    }
  }
};

// z1^2 - z2, z1 z2 - 1: Bezout number 4, three finite roots z1^3 = 1.
class Cusp : public PolynomialSystem {
 public:
  int size() const override { return 2; }
  std::vector<int> degrees() const override { return {2, 2}; }
  void evaluate(const CVector& z, CVector& v, CMatrix* J) const override {
    v.resize(2);
    v << z(0) * z(0) - z(1), z(0) * z(1) - 1.0;
    if (J) {
      J->resize(2, 2);
      *J << 2.0 * z(0), -1.0, z(1), z(0);
    }
  }
};

std::vector<CVector> converged(const std::vector<PathResult>& rs) {
  std::vector<CVector> out;
  for (const PathResult& r : rs)
    if (r.status == PathStatus::kConverged) out.push_back(r.z);
  return out;
}

bool contains(const std::vector<CVector>& zs, const CVector& want) {
  return std::any_of(zs.begin(), zs.end(), [&](const CVector& z) { return (z - want).norm() < 1e-8; });
}

}  // namespace

TEST(TotalDegreeStart, StartPointsSolveStartSystem) {
  const TotalDegreeStart s = TotalDegreeStart::random({2, 3, 1}, 5);
  EXPECT_EQ(s.path_count(), 6u);
  CVector v;
  for (std::size_t p = 0; p < s.path_count(); ++p) {
    s.evaluate(s.start_point(p), v, nullptr);
    EXPECT_LE(v.norm(), 1e-12);
    for (std::size_t q = 0; q < p; ++q) EXPECT_GT((s.start_point(p) - s.start_point(q)).norm(), 1e-3);
  }
}

TEST(TrackAll, FindsAllRootsOfRegularSystem) {
  Circle sys;
  const auto rs = track_all(sys, TotalDegreeStart::random(sys.degrees(), 1), TrackerConfig{});
  const auto zs = converged(rs);
  ASSERT_EQ(zs.size(), 4u);
  for (const auto& [a, b] : std::vector<std::pair<double, double>>{{1, 2}, {2, 1}, {-1, -2}, {-2, -1}}) {
    CVector w(2);
    w << a, b;
    EXPECT_TRUE(contains(zs, w)) << a << "," << b;
  }
}

TEST(TrackAll, PathToInfinityDiverges) {
  Cusp sys;
  const auto rs = track_all(sys, TotalDegreeStart::random(sys.degrees(), 2), TrackerConfig{});
  const auto zs = converged(rs);
  ASSERT_EQ(zs.size(), 3u);
  for (int k = 0; k < 3; ++k) {
    const cplx w = std::polar(1.0, 2.0 * M_PI * k / 3.0);
    CVector want(2);
    want << w, w * w;
    EXPECT_TRUE(contains(zs, want));
  }
  EXPECT_EQ(std::count_if(rs.begin(), rs.end(), [](const PathResult& r) { return r.status == PathStatus::kDiverged; }),
            1);
}

TEST(TrackAll, ThreadsDoNotChangeResults) {
  Circle sys;
  const TotalDegreeStart s = TotalDegreeStart::random(sys.degrees(), 3);
  TrackerConfig one, four;
  four.threads = 4;
  const auto a = track_all(sys, s, one), b = track_all(sys, s, four);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].status, b[i].status);
    EXPECT_EQ(a[i].z, b[i].z);
  }
}

TEST(NewtonPolish, Converges) {
  Circle sys;
  CVector z(2);
  z << 1.1, 1.9;
  EXPECT_TRUE(newton_polish(sys, z, 1e-14, 20));
  EXPECT_NEAR(std::abs(z(0) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(z(1) - 2.0), 0.0, 1e-12);
}

// Holomorphic system, so a real-direction central difference recovers J e_k.
TEST(SquareSystem, JacobianMatchesFiniteDifferences) {
  std::mt19937_64 rng(41);
  for (const TensorFormat& fmt : {TensorFormat::ordinary({2, 2, 2}), TensorFormat({3, 1}, {2, 3}),
                                  TensorFormat::symmetric(4, 3)}) {
    const SquareSystem sys(random_tensor(fmt, rng(), false), rng());
    const int n = sys.size();
    EXPECT_EQ(n, fmt.total_proj_dim());
    for (int trial = 0; trial < 10; ++trial) {
      const CVector z = oracle::random_vector(rng, n);
      CVector v, vp, vm;
      CMatrix J;
      sys.evaluate(z, v, &J);
      const double h = 1e-6;
      for (int k = 0; k < n; ++k) {
        const CVector e = CVector::Unit(n, k) * h;
        sys.evaluate(z + e, vp, nullptr);
        sys.evaluate(z - e, vm, nullptr);
        const CVector fd = (vp - vm) / (2.0 * h);
        EXPECT_LE((fd - J.col(k)).norm(), 1e-6 * (1.0 + J.col(k).norm()));
      }
    }
  }
}

TEST(SquareSystem, ChartRoundTrip) {
  std::mt19937_64 rng(42);
  const TensorFormat fmt({2, 1}, {3, 2});
  const SquareSystem sys(random_tensor(fmt, 1, false), 7);
  const CVector z = oracle::random_vector(rng, sys.size());
  EXPECT_LE((sys.chart_coords(sys.tuple(z)) - z).norm(), 1e-10);
}

TEST(MultiPoly, MatchesInnerWithRankOne) {
  std::mt19937_64 rng(43);
  const TensorFormat fmt({2, 1}, {2, 3});
  const Tensor f = random_tensor(fmt, rng(), false);
  const MultiPoly P(f);
  const VectorTuple t = oracle::random_tuple(rng, fmt);
  CVector x(5);
  x << t[0], t[1];
  EXPECT_NEAR(std::abs(P.evaluate(x, nullptr, nullptr) - inner(f, rank_one(fmt, t))), 0.0, 1e-12 * hermitian_norm(f) * 10);
}
