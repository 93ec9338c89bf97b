// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "crit/als.hpp"
#include "crit/counting.hpp"
#include "crit/critical_solver.hpp"
#include "crit/harness.hpp"
#include "crit/io.hpp"

using namespace crit;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) detail << "first failure: " << what << "; ";
      ok = false;
    }
  }
};

std::vector<TensorFormat> pairing_formats() {
  return {TensorFormat::ordinary({2, 2, 2}), TensorFormat::ordinary({2, 3}), TensorFormat::ordinary({3, 3}),
          TensorFormat::symmetric(3, 2),     TensorFormat::symmetric(2, 3), TensorFormat({3, 1}, {2, 3}),
          TensorFormat::ordinary({2, 2, 4})};
}

VectorTuple random_tuple(std::mt19937_64& rng, const TensorFormat& fmt) {
  std::normal_distribution<double> g;
  std::vector<CVector> vs;
  for (int l = 0; l < fmt.factors(); ++l) {
    CVector v(fmt.dim(l));
    for (Index i = 0; i < v.size(); ++i) v(i) = cplx(g(rng), g(rng));
    vs.push_back(v);
  }
  return VectorTuple(vs);
}

RMatrix matrix_of(const Tensor& f, int m, int n) { return f.coeffs().real().reshaped<Eigen::RowMajor>(m, n); }

int non_isotropic(const std::vector<CriticalPoint>& pts) {
  int c = 0;
  for (const CriticalPoint& p : pts) c += !p.is_isotropic();
  return c;
}

double worst(const std::vector<CriticalPoint>& pts, double CriticalPoint::*field) {
  double w = 0.0;
  for (const CriticalPoint& p : pts) w = std::max(w, p.*field);
  return w;
}

void pairing_laws(Outcome& o) {
  std::mt19937_64 rng(1);
  double skew = 0.0, r1 = 0.0;
  long long monomial_pairs = 0;
  for (const TensorFormat& fmt : pairing_formats()) {
    for (int trial = 0; trial < 200; ++trial) {
      const Tensor f = random_tensor(fmt, rng(), false), g = random_tensor(fmt, rng(), false);
      const double s = hermitian_norm(f) * hermitian_norm(g);
      const VectorTuple t = random_tuple(rng, fmt);
      const Tensor x = rank_one(f.basis_ptr(), t);
      const double sx = hermitian_norm(f) * hermitian_norm(x);
      for (int l = 0; l < fmt.factors(); ++l) {
        skew = std::max(skew, (pair_ell(f, g, l) + pair_ell(g, f, l)).norm() / s);
        r1 = std::max(r1, (pair_rank_one(f, t, l).upper() - pair_ell(f, x, l).upper()).norm() / sx);
      }
    }
    const std::vector<MonomialIndex> ms = monomial_basis(fmt);
    for (int l = 0; l < fmt.factors(); ++l)
      for (const MonomialIndex& a : ms)
        for (const MonomialIndex& b : ms) {
          bool rest = true;
          for (int i = 0; i < fmt.factors(); ++i) rest = rest && (i == l || a.exponents[i] == b.exponents[i]);
          int gdeg = 0;
          for (int j = 0; j < fmt.dim(l); ++j) gdeg += std::min(a.exponents[l][j], b.exponents[l][j]);
          const bool support = rest && gdeg == fmt.degree(l) - 1;
          const bool nonzero = !pair_monomials(fmt, a, b, l).upper().isZero(0.0);
          o.require(support == nonzero, "support condition on " + format_string(fmt));
          ++monomial_pairs;
        }
  }
  o.require(skew <= 1e-12, "skew-symmetry");
  o.require(r1 <= 1e-12, "pair_rank_one vs pair_ell");
  o.detail << "skew " << skew << ", rank-one " << r1 << ", " << monomial_pairs << " monomial pairs";
}

void f_in_H(Outcome& o) {
  double w = 0.0;
  for (const TensorFormat& fmt : pairing_formats())
    for (std::uint64_t seed = 0; seed < 10; ++seed)
      for (bool real : {true, false}) w = std::max(w, membership_residual(random_tensor(fmt, seed, real), random_tensor(fmt, seed, real)));
  o.require(w <= 1e-12, "membership of f");
  o.detail << "max residual " << w;
}

void codimension(Outcome& o) {
  const std::vector<std::pair<TensorFormat, int>> cases = {{TensorFormat::ordinary({2, 2, 2}), 3},
                                                           {TensorFormat::ordinary({3, 3}), 6},
                                                           {TensorFormat::symmetric(3, 2), 1},
                                                           {TensorFormat::ordinary({3, 3, 3}), 9}};
  double min_gap = std::numeric_limits<double>::infinity();
  for (const auto& [fmt, want] : cases) {
    o.require(expected_codim(fmt).value == want, "expected_codim " + format_string(fmt));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const CriticalSpace H = critical_space(random_tensor(fmt, seed, true));
      o.require(H.codim == want, "codim " + format_string(fmt) + " seed " + std::to_string(seed));
      min_gap = std::min(min_gap, H.gap);
    }
  }
  o.require(min_gap >= 1e4, "spectral gap");
  o.detail << "codims 3,6,1,9 over 10 seeds, min gap " << min_gap;
}

void enumeration_222(Outcome& o) {
  const TensorFormat fmt = TensorFormat::ordinary({2, 2, 2});
  const Tensor f = random_tensor(fmt, 0, true);
  const SolveResult res = solve_critical_rank_one(f);
  const CriticalSpace H = critical_space(f);
  const long long count = count_critical_rank_one(fmt).convert_to<long long>();
  const SpanCheck sc = span_check(f, res.points, H.basis, kDefaultRankTol);
  o.require(res.stats.total == 27, "27 paths");
  o.require(res.points.size() == 6 && non_isotropic(res.points) == 6 && count == 6, "6 non-isotropic points");
  o.require(worst(res.points, &CriticalPoint::perpendicularity) <= 1e-8, "perpendicularity");
  o.require(worst(res.points, &CriticalPoint::membership) <= 1e-8, "membership");
  o.require(sc.rank == 5 && H.dim() == 5, "span rank 5 = dim H_f");
  o.require(sc.f_residual <= 1e-8, "f in span");
  o.detail << res.stats.total << " paths, " << res.points.size() << " points (count " << count << "), span rank "
           << sc.rank << ", dim H_f " << H.dim() << ", f-in-span " << sc.f_residual;
}

void matrix_oracle(Outcome& o) {
  double worst_dist = 0.0, worst_scale = 0.0, worst_kernel = 0.0, worst_trunc = 0.0;
  for (const auto& [m, n] : std::vector<std::pair<int, int>>{{3, 3}, {3, 4}}) {
    const TensorFormat fmt = TensorFormat::ordinary({m, n});
    const Tensor f = random_tensor(fmt, 0, true);
    const RMatrix A = matrix_of(f, m, n);
    const SvdResult svd = hermitian_svd_baseline(A);
    const SolveResult res = solve_critical_rank_one(f);
    o.require(static_cast<Index>(res.points.size()) == svd.sigma.size(), "point count vs SVD");
    for (Index i = 0; i < svd.sigma.size(); ++i) {
      const VectorTuple t({svd.U.col(i).cast<cplx>(), svd.V.col(i).cast<cplx>()});
      double best = 1.0, scale_err = 1.0;
      for (const CriticalPoint& p : res.points) {
        const double d = tuple_distance(p.tuple, t);
        if (d < best) {
          best = d;
          scale_err = std::abs(std::abs(*p.scale) - svd.sigma(i)) / svd.sigma(0);
        }
      }
      worst_dist = std::max(worst_dist, best);
      worst_scale = std::max(worst_scale, scale_err);
    }

    CMatrix M = CMatrix::Zero(m * m + n * n, m * n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        RMatrix B = RMatrix::Zero(m, n);
        B(i, j) = 1.0;
        const RMatrix S1 = A * B.transpose() - B * A.transpose(), S2 = A.transpose() * B - B.transpose() * A;
        M.col(i * n + j) << S1.reshaped().cast<cplx>(), S2.reshaped().cast<cplx>();
      }
    const RankResult sym = rank_and_kernel(M);
    const CriticalSpace H = critical_space(f);
    o.require(sym.kernel_basis.cols() == H.dim(), "kernel dimension");
    worst_kernel = std::max(worst_kernel, subspace_distance(H.basis, sym.kernel_basis));

    const int r = static_cast<int>(svd.sigma.size());
    for (int mask = 1; mask < (1 << r); ++mask) {
      RMatrix B = RMatrix::Zero(m, n);
      for (int i = 0; i < r; ++i)
        if (mask >> i & 1) B += svd.sigma(i) * svd.U.col(i) * svd.V.col(i).transpose();
      CVector c(m * n);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) c(i * n + j) = B(i, j);
      worst_trunc = std::max(worst_trunc, membership_residual(f, Tensor(f.basis_ptr(), c)));
    }
  }
  o.require(worst_dist <= 1e-6 && worst_scale <= 1e-6, "SVD match");
  o.require(worst_kernel <= 1e-8, "H_f vs symmetric-product kernel");
  o.require(worst_trunc <= 1e-10, "truncations in H_f");
  o.detail << "tuple dist " << worst_dist << ", scale err " << worst_scale << ", kernel dist " << worst_kernel
           << ", truncation membership " << worst_trunc;
}

void symmetric_case(Outcome& o) {
  const Tensor f = random_tensor(TensorFormat::symmetric(3, 2), 0, true);
  const SolveResult res = solve_critical_rank_one(f);
  const CriticalSpace H = critical_space(f);
  const CVector row = f.basis().weights().cast<cplx>().cwiseProduct(binary_D(f).coeffs());
  const CMatrix Dperp = rank_and_kernel(row.transpose()).kernel_basis;
  const CMatrix Hplain = f.basis().sqrt_weights().cwiseInverse().cast<cplx>().asDiagonal() * H.basis;
  const double dist = subspace_distance(Hplain, Dperp);
  o.require(non_isotropic(res.points) == 3 && count_critical_rank_one(f.format()) == 3, "S3C2 points");
  o.require(dist <= 1e-8, "H_f = D(f)^perp");

  const Tensor g = random_tensor(TensorFormat::symmetric(3, 3), 0, true);
  const SolveResult rg = solve_critical_rank_one(g);
  const CriticalSpace Hg = critical_space(g);
  const SpanCheck sc = span_check(g, rg.points, Hg.basis, kDefaultRankTol);
  o.require(non_isotropic(rg.points) == 7 && symmetric_count_closed_form(3, 2) == 7 &&
                count_critical_rank_one(g.format()) == 7,
            "S3C3 points");
  o.require(sc.rank == 7 && Hg.dim() == 7, "S3C3 span rank = dim H_f = 7");
  o.detail << "S3C2: " << res.points.size() << " points, D(f)-perp dist " << dist << "; S3C3: " << rg.points.size()
           << " points, span rank " << sc.rank << ", dim H_f " << Hg.dim();
}

void higher_rank(Outcome& o) {
  double worst_member = 0.0, worst_ey = 0.0;
  int asserted = 0, skipped = 0;
  for (const TensorFormat& fmt : {TensorFormat::ordinary({2, 2, 2}), TensorFormat::ordinary({3, 3})})
    for (int k = 1; k <= 2; ++k) {
      int here = 0;
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Tensor f = random_tensor(fmt, seed, true);
        AlsConfig cfg;
        cfg.seed = seed;
        const AlsResult r = als_critical_rank_k(f, k, cfg);
        if (r.criticality_residual <= 1e-8) {
          worst_member = std::max(worst_member, membership_residual(f, r.g));
          ++asserted;
          ++here;
        } else {
          ++skipped;
        }
        if (fmt.is_matrix()) {
          const RVector s = hermitian_svd_baseline(matrix_of(f, 3, 3)).sigma;
          const double tail = s.tail(s.size() - k).squaredNorm();
          worst_ey = std::max(worst_ey, std::abs(r.objective - tail) / s.squaredNorm());
        }
      }
      o.require(here > 0, "no critical ALS output for " + format_string(fmt) + " k=" + std::to_string(k));
    }
  o.require(worst_member <= 1e-6, "ALS membership");
  o.require(worst_ey <= 1e-8, "Eckart-Young");
  o.detail << asserted << " critical runs (membership " << worst_member << "), " << skipped
           << " not critical, Eckart-Young " << worst_ey;
}

void experiment_2x2x4(Outcome& o) {
  const TensorFormat fmt = TensorFormat::ordinary({2, 2, 4});
  double worst_f = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Tensor f = random_tensor(fmt, seed, true);
    const CriticalSpace H = critical_space(f);
    TrackerConfig cfg;
    cfg.seed = seed;
    const SolveResult res = solve_critical_rank_one(f, cfg);
    const SpanCheck sc = span_check(f, res.points, H.basis, kDefaultRankTol);
    const std::string s = " seed " + std::to_string(seed);
    o.require(H.dim() == 8, "dim H_f" + s);
    o.require(non_isotropic(res.points) == 8 && count_critical_rank_one(fmt) == 8, "count" + s);
    o.require(sc.rank == 7, "span rank" + s);
    worst_f = std::max(worst_f, sc.f_residual);
  }
  o.require(worst_f <= 1e-8, "f in span");
  o.detail << "dims (8, 7) on seeds 0-9, worst f-in-span " << worst_f;
}

void cohomology(Outcome& o) {
  o.require(bott_h(2, 0, 1, 2) == 3, "case 1");
  o.require(bott_h(1, 1, 1, 0) == 1, "case 2");
  o.require(bott_h(2, 2, 0, -3) == 1, "case 3");
  o.require(bott_h(2, 1, 1, 3) == 0, "case 4");
  long long serre = 0;
  for (int n = 0; n <= 6; ++n)
    for (int q = 0; q <= n; ++q)
      for (int r = 0; r <= n; ++r)
        for (int k = -12; k <= 12; ++k, ++serre)
          o.require(bott_h(n, q, r, k) == bott_h(n, n - q, n - r, -k), "Serre symmetry");

  int formats = 0;
  std::function<void(std::vector<int>&, std::vector<int>&, int)> rec = [&](std::vector<int>& deg,
                                                                            std::vector<int>& dim, int N) {
    if (!deg.empty()) {
      const TensorFormat fmt(deg, dim);
      if (fmt.all_triangle_ok()) {
        ++formats;
        for (int k = 2; k <= N; ++k)
          for (int q = 0; q < k; ++q) o.require(vanishing_check(fmt, k, q) == 0, "vanishing " + format_string(fmt));
      }
    }
    if (deg.size() == 4) return;
    for (int n = 1; N + n <= 6; ++n)
      for (int d = 1; d <= 3; ++d) {
        deg.push_back(d);
        dim.push_back(n + 1);
        rec(deg, dim, N + n);
        deg.pop_back();
        dim.pop_back();
      }
  };
  std::vector<int> deg, dim;
  rec(deg, dim, 0);

  for (int n = 0; n <= 10; ++n)
    for (int p = 1; p <= 3; ++p) {
      const ExpectedCodim e = expected_codim(TensorFormat(std::vector<int>(p, 1), std::vector<int>(p, n + 1)));
      o.require(e.value == e.h0_cross_check && e.value == p * (n + 1) * n / 2, "expected_codim n=" + std::to_string(n));
    }
  o.detail << serre << " Serre pairs, " << formats << " triangle formats, codim cross-check n<=10";
}

void border_rank(Outcome& o) {
  const Tensor w = w_tensor();
  const double fn = hermitian_norm(w);
  std::vector<AlsTracePoint> trace;
  AlsConfig cfg;
  cfg.max_sweeps = 10000;
  als_run(w, random_terms(w.format(), 2, 0), cfg, &trace, false);
  int hit = 0;
  for (const AlsTracePoint& p : trace)
    if (p.objective < 0.01 * fn * fn && p.max_term_norm > 10.0 * fn) {
      hit = p.sweep;
      break;
    }
  o.require(hit > 0, "objective < 0.01|f|^2 with term norm > 10|f|");
  o.detail << "first at sweep " << hit << "; at sweep " << trace.back().sweep << ": objective "
           << trace.back().objective << ", max term norm " << trace.back().max_term_norm;
}

struct Criterion {
  int id;
  const char* name;
  double budget;
  void (*run)(Outcome&);
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "pairing_laws", 5, pairing_laws},          {2, "f_in_critical_space", 1, f_in_H},
      {3, "codimension", 5, codimension},            {4, "rank_one_enumeration_2x2x2", 30, enumeration_222},
      {5, "matrix_svd_oracle", 30, matrix_oracle},   {6, "symmetric_case", 60, symmetric_case},
      {7, "higher_rank_als", 60, higher_rank},       {8, "experiment_2x2x4", 60, experiment_2x2x4},
      {9, "cohomology_suite", 10, cohomology},       {10, "border_rank_w_tensor", 10, border_rank},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget) {
      o.ok = false;
      o.detail << "; over budget " << c.budget << " s";
    }
    failed += !o.ok;
    std::printf("%s %d %s (%.2f s) %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
