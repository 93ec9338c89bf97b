#include "crit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crit/io.hpp"

namespace crit {

using nlohmann::json;

namespace {

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json real_vector_json(const RVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(finite_or_null(v(i)));
  return out;
}

RMatrix matrix_of(const Tensor& f) {
  const int m = f.format().dim(0), n = f.format().dim(1);
  RMatrix A(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = f[static_cast<Index>(i) * n + j].real();
  return A;
}

// Kernel of B -> (A B^T - B A^T, A^T B - B^T A), B stored row-major like the tensor coefficients.
CMatrix matrix_symmetry_kernel(const RMatrix& A, double rank_tol) {
  const Index m = A.rows(), n = A.cols();
  const Index rows = m * (m - 1) / 2 + n * (n - 1) / 2;
  CMatrix L = CMatrix::Zero(rows, m * n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) {
      RMatrix B = RMatrix::Zero(m, n);
      B(i, j) = 1.0;
      const RMatrix X = A * B.transpose() - B * A.transpose();
      const RMatrix Y = A.transpose() * B - B.transpose() * A;
      Index r = 0;
      for (Index a = 0; a < m; ++a)
        for (Index b = a + 1; b < m; ++b) L(r++, i * n + j) = X(a, b);
      for (Index a = 0; a < n; ++a)
        for (Index b = a + 1; b < n; ++b) L(r++, i * n + j) = Y(a, b);
    }
  return rank_and_kernel(L, rank_tol).kernel_basis;
}

// Homotopy points against the SVD singular pairs.
struct SvdMatch {
  int matched = 0;
  double worst_tuple = 0.0;
  double worst_scale = 0.0;
};

SvdMatch match_svd(const RMatrix& A, const std::vector<CriticalPoint>& points) {
  const SvdResult svd = hermitian_svd_baseline(A);
  SvdMatch out;
  const Index r = std::min(A.rows(), A.cols());
  for (Index i = 0; i < r; ++i) {
    const VectorTuple t({svd.U.col(i).cast<cplx>(), svd.V.col(i).cast<cplx>()});
    double best = 1.0;
    double scale_err = std::numeric_limits<double>::infinity();
    for (const CriticalPoint& p : points) {
      const double d = tuple_distance(t, p.tuple);
      if (d < best) {
        best = d;
        scale_err = p.scale ? std::abs(std::abs(*p.scale) - svd.sigma(i)) / svd.sigma(0) : 1.0;
      }
    }
    out.worst_tuple = std::max(out.worst_tuple, best);
    out.worst_scale = std::max(out.worst_scale, scale_err);
    if (best <= 1e-6) ++out.matched;
  }
  return out;
}

int count_non_isotropic(const std::vector<CriticalPoint>& pts) {
  return static_cast<int>(std::count_if(pts.begin(), pts.end(), [](const CriticalPoint& p) { return !p.is_isotropic(); }));
}

double max_over_points(const std::vector<CriticalPoint>& pts, double CriticalPoint::*field, bool skip_isotropic) {
  double m = 0.0;
  for (const CriticalPoint& p : pts) {
    if (skip_isotropic && p.is_isotropic()) continue;
    m = std::max(m, p.*field);
  }
  return m;
}

long long path_count(const TensorFormat& fmt) {
  long double paths = std::pow(static_cast<long double>(fmt.total_degree()), fmt.total_proj_dim());
  return paths > 9e18L ? std::numeric_limits<long long>::max() : static_cast<long long>(paths);
}

// Solver stage shared by verify and the 2x2x4 experiment; returns the points (empty if skipped).
std::vector<CriticalPoint> solver_stage(Report& rep, const Tensor& f, const CriticalSpace& cs, const VerifyOptions& opt,
                                        bool theorem_span) {
  const TensorFormat& fmt = f.format();
  const Tolerances& tol = opt.tol;
  json& d = rep.data();
  const long long paths = path_count(fmt);
  d["solver"]["paths"] = paths;
  if (paths > opt.max_paths) {
    d["solver"]["skipped"] = "D^N = " + std::to_string(paths) + " exceeds " + std::to_string(opt.max_paths);
    return {};
  }
  TrackerConfig cfg;
  cfg.seed = opt.seed;
  cfg.threads = opt.threads;
  const SolveResult res = solve_critical_rank_one(f, cfg, tol.newton);
  d["solver"]["stats"] = path_stats_json(res.stats);
  d["solver"]["warnings"] = res.warnings;
  json pts = json::array();
  for (const CriticalPoint& p : res.points) pts.push_back(point_json(p));
  d["points"] = pts;

  const long long count = count_critical_rank_one(fmt).convert_to<long long>();
  d["count"] = count;
  rep.check_eq("points_equal_count", count_non_isotropic(res.points), count);
  rep.check_eq("isotropic_points", static_cast<long long>(res.points.size()) - count_non_isotropic(res.points), 0);
  rep.check_le("max_newton_residual", max_over_points(res.points, &CriticalPoint::newton_residual, false), tol.newton);
  rep.check_le("max_point_membership", max_over_points(res.points, &CriticalPoint::membership, false), tol.member);
  rep.check_le("max_perpendicularity", max_over_points(res.points, &CriticalPoint::perpendicularity, true), tol.perp);

  const SpanCheck sc = span_check(f, res.points, cs.basis, tol.rank);
  d["span"] = {{"rank", sc.rank}, {"dim_H_f", cs.dim()}, {"f_in_span_residual", sc.f_residual},
               {"distance_to_H_f", sc.distance_to_H}};
  if (theorem_span) {
    rep.check_eq("span_rank_equals_dim_H_f", sc.rank, cs.dim());
    rep.check_le("span_equals_H_f", sc.distance_to_H, tol.span);
    rep.check_le("f_in_span_residual", sc.f_residual, tol.span);
  } else {
    d["span"]["note"] = "triangle inequality fails for a factor with d = 1; span not asserted";
  }
  return res.points;
}

void matrix_stage(Report& rep, const Tensor& f, const CriticalSpace& cs, const std::vector<CriticalPoint>& points,
                  const Tolerances& tol) {
  const RMatrix A = matrix_of(f);
  const SvdResult svd = hermitian_svd_baseline(A);
  json& d = rep.data()["matrix"];
  d["singular_values"] = real_vector_json(svd.sigma);
  if (!points.empty()) {
    const SvdMatch m = match_svd(A, points);
    d["svd_match"] = {{"matched", m.matched}, {"worst_tuple_distance", m.worst_tuple}, {"worst_scale_error", m.worst_scale}};
    rep.check_eq("svd_pairs_matched", m.matched, svd.sigma.size());
    rep.check_le("svd_tuple_distance", m.worst_tuple, tol.svd_match);
    rep.check_le("svd_scale_error", m.worst_scale, tol.svd_match);
  }
  const CMatrix K = matrix_symmetry_kernel(A, tol.rank);
  const double dist = subspace_distance(K, cs.basis, tol.rank);
  d["symmetric_products_kernel_distance"] = dist;
  rep.check_le("H_f_equals_symmetric_products_kernel", dist, tol.span);

  // Sums of subsets of the SVD terms all lie in H_f.
  const Index r = svd.sigma.size();
  double worst = 0.0;
  for (unsigned mask = 1; mask < (1u << r); ++mask) {
    RMatrix B = RMatrix::Zero(A.rows(), A.cols());
    for (Index i = 0; i < r; ++i)
      if (mask & (1u << i)) B += svd.sigma(i) * svd.U.col(i) * svd.V.col(i).transpose();
    CVector c(B.size());
    for (Index i = 0; i < B.rows(); ++i)
      for (Index j = 0; j < B.cols(); ++j) c(i * B.cols() + j) = B(i, j);
    worst = std::max(worst, membership_residual(f, Tensor(f.basis_ptr(), c)));
  }
  d["truncation_membership"] = worst;
  rep.check_le("svd_truncations_in_H_f", worst, tol.truncation);
}

void binary_stage(Report& rep, const Tensor& f, const CriticalSpace& cs, const Tolerances& tol) {
  const Tensor D = binary_D(f);
  const CVector row = f.basis().sqrt_weights().cast<cplx>().cwiseProduct(D.coeffs());
  const CMatrix K = rank_and_kernel(row.transpose(), tol.rank).kernel_basis;
  const double dist = subspace_distance(K, cs.basis, tol.rank);
  rep.data()["binary"] = {{"D_f", tensor_json(D)}, {"distance_H_f_to_D_f_perp", dist}};
  rep.check_le("H_f_equals_D_f_perp", dist, tol.span);
}

void als_stage(Report& rep, const Tensor& f, const VerifyOptions& opt) {
  const Tolerances& tol = opt.tol;
  json out = json::array();
  RVector sigma;
  if (f.format().is_matrix()) sigma = hermitian_svd_baseline(matrix_of(f)).sigma;
  const double fn2 = std::pow(hermitian_norm(f), 2);
  for (int k : opt.als_ranks) {
    AlsConfig cfg;
    cfg.seed = opt.seed;
    cfg.restarts = opt.restarts;
    const AlsResult r = als_critical_rank_k(f, k, cfg);
    const double mem = r.g.is_zero() ? 0.0 : membership_residual(f, r.g);
    json e = {{"k", k},           {"objective", r.objective},          {"criticality_residual", r.criticality_residual},
              {"membership", mem}, {"sweeps", r.sweeps},                {"restart", r.restart},
              {"max_term_norm", r.max_term_norm}};
    const std::string tag = "als_k" + std::to_string(k);
    if (r.criticality_residual <= tol.als_critical) {
      rep.check_le(tag + "_membership", mem, tol.als_member);
    } else {
      e["note"] = "not critical; membership not asserted";
    }
    if (sigma.size() > 0) {
      const double tail = k < sigma.size() ? sigma.tail(sigma.size() - k).squaredNorm() : 0.0;
      e["svd_tail"] = tail;
      rep.check_le(tag + "_eckart_young", std::abs(r.objective - tail) / fn2, tol.eckart_young);
    }
    out.push_back(e);
  }
  rep.data()["als"] = out;
}

}  // namespace

json Tolerances::to_json() const {
  return json{{"rank", rank},
              {"member", member},
              {"newton", newton},
              {"span", span},
              {"f_member", f_member},
              {"perp", perp},
              {"gap", gap},
              {"svd_match", svd_match},
              {"truncation", truncation},
              {"eckart_young", eckart_young},
              {"als_critical", als_critical},
              {"als_member", als_member}};
}

Report::Report(std::string command) : command_(std::move(command)) {}

bool Report::record(json a) {
  const bool ok = a["pass"].get<bool>();
  assertions_.push_back(std::move(a));
  return ok;
}

bool Report::check_le(const std::string& name, double value, double tol, const std::string& kind) {
  return record({{"name", name}, {"value", finite_or_null(value)}, {"tol", tol}, {"op", "<="},
                 {"pass", value <= tol}, {"kind", kind}});
}

bool Report::check_ge(const std::string& name, double value, double bound, const std::string& kind) {
  return record({{"name", name}, {"value", std::isinf(value) ? json("inf") : finite_or_null(value)}, {"tol", bound},
                 {"op", ">="}, {"pass", value >= bound}, {"kind", kind}});
}

bool Report::check_eq(const std::string& name, long long value, long long expected, const std::string& kind) {
  return record({{"name", name}, {"value", value}, {"tol", expected}, {"op", "=="}, {"pass", value == expected},
                 {"kind", kind}});
}

bool Report::check(const std::string& name, bool ok, const json& value, const std::string& kind) {
  return record({{"name", name}, {"value", value}, {"tol", nullptr}, {"op", "holds"}, {"pass", ok}, {"kind", kind}});
}

bool Report::passed() const {
  return std::all_of(assertions_.begin(), assertions_.end(), [](const json& a) { return a["pass"].get<bool>(); });
}

json Report::to_json() const {
  json out = {{"schema_version", kReportSchemaVersion}, {"version", kVersion}, {"command", command_}};
  for (auto it = data_.begin(); it != data_.end(); ++it) out[it.key()] = it.value();
  out["assertions"] = assertions_;
  out["pass"] = passed();
  return out;
}

SpanCheck span_check(const Tensor& f, const std::vector<CriticalPoint>& points, const CMatrix& H_basis,
                     double rank_tol) {
  SpanCheck out;
  const CMatrix M = critical_tensor_matrix(points);
  if (M.cols() == 0) return out;
  const CMatrix W = f.basis().sqrt_weights().cast<cplx>().asDiagonal() * M;
  out.rank = rank_and_kernel(W, rank_tol).rank;
  const CVector b = f.weighted_coords();
  const LeastSquaresResult ls = least_squares(W, b);
  out.f_residual = (W * ls.x - b).norm() / b.norm();
  out.distance_to_H = subspace_distance(W, H_basis, rank_tol);
  return out;
}

json point_json(const CriticalPoint& p) {
  json tuple = json::array();
  for (const CVector& v : p.tuple.vectors()) tuple.push_back(vector_json(v));
  return json{{"tuple", tuple},
              {"scale", p.scale ? complex_json(*p.scale) : json(nullptr)},
              {"newton_residual", p.newton_residual},
              {"isotropic", p.isotropic},
              {"membership", p.membership},
              {"perpendicularity", finite_or_null(p.perpendicularity)}};
}

json path_stats_json(const PathStats& s) {
  return json{{"total", s.total},       {"converged", s.converged},
              {"diverged", s.diverged}, {"failed", s.failed},
              {"rejected_endpoints", s.rejected_endpoints}, {"distinct", s.distinct}};
}

Report cmd_verify(const TensorFormat& format, const VerifyOptions& opt) {
  Report rep("verify");
  const Tolerances& tol = opt.tol;
  json& d = rep.data();
  d["format"] = format_string(format);
  d["seed"] = opt.seed;
  d["dim_T"] = format.space_dim();
  d["tolerances"] = tol.to_json();

  const Tensor f = random_tensor(format, opt.seed, true);
  const CriticalSpace cs = critical_space(f, tol.rank);
  const ExpectedCodim expected = expected_codim(format);
  d["critical_space"] = {{"codim", cs.codim},
                         {"dim", cs.dim()},
                         {"gap", std::isinf(cs.gap) ? json("inf") : json(cs.gap)},
                         {"expected_codim", expected.value},
                         {"theorem_applies", format.theorem_triangle_ok()}};
  if (format.theorem_triangle_ok()) {
    rep.check_eq("codim_equals_expected", cs.codim, expected.value);
    rep.check_ge("spectral_gap", cs.gap, tol.gap);
  }
  rep.check_le("f_membership", membership_residual(f, f), tol.f_member);

  const std::vector<CriticalPoint> points = solver_stage(rep, f, cs, opt, format.theorem_triangle_ok());
  if (format.is_matrix()) matrix_stage(rep, f, cs, points, tol);
  if (format.factors() == 1 && format.dim(0) == 2) binary_stage(rep, f, cs, tol);
  als_stage(rep, f, opt);
  return rep;
}

Report cmd_experiment_2x2x4(const VerifyOptions& opt) {
  Report rep("experiment-2x2x4");
  const Tolerances& tol = opt.tol;
  const TensorFormat format = TensorFormat::ordinary({2, 2, 4});
  json& d = rep.data();
  d["format"] = format_string(format);
  d["seed"] = opt.seed;
  d["dim_T"] = format.space_dim();
  d["tolerances"] = tol.to_json();

  const Tensor f = random_tensor(format, opt.seed, true);
  const CriticalSpace cs = critical_space(f, tol.rank);
  d["critical_space"] = {{"codim", cs.codim},
                         {"dim", cs.dim()},
                         {"gap", std::isinf(cs.gap) ? json("inf") : json(cs.gap)},
                         {"expected_codim", expected_codim(format).value},
                         {"theorem_applies", format.theorem_triangle_ok()}};
  rep.check_eq("dim_H_f", cs.dim(), 8);
  rep.check_eq("count_critical_rank_one", count_critical_rank_one(format).convert_to<long long>(), 8);
  rep.check_le("f_membership", membership_residual(f, f), tol.f_member);

  solver_stage(rep, f, cs, opt, false);
  const int span_rank = d["span"]["rank"].get<int>();
  d["span"].erase("note");
  rep.check_le("f_in_span_residual", d["span"]["f_in_span_residual"].get<double>(), tol.span, "observation");
  rep.check_eq("span_rank", span_rank, 7);
  rep.check("span_smaller_than_H_f", span_rank < cs.dim(), {{"span_rank", span_rank}, {"dim_H_f", cs.dim()}});

  json nonzero = json::array();
  for (int k = 2; k <= format.total_proj_dim(); ++k)
    for (int q = 0; q < k; ++q) {
      const BigInt v = vanishing_check(format, k, q);
      if (v != 0) nonzero.push_back({{"k", k}, {"q", q}, {"dim", v.convert_to<long long>()}});
    }
  d["nonvanishing"] = nonzero;
  rep.check("some_vanishing_fails", !nonzero.empty(), static_cast<long long>(nonzero.size()));
  return rep;
}

Report cmd_demo_wtensor(std::uint64_t seed, int max_sweeps) {
  Report rep("demo-wtensor");
  const Tensor w = w_tensor();
  const double fn = hermitian_norm(w);
  AlsConfig cfg;
  cfg.seed = seed;
  cfg.max_sweeps = max_sweeps;
  std::vector<AlsTracePoint> trace;
  const AlsResult r = als_run(w, random_terms(w.format(), 2, seed), cfg, &trace, false);

  const double obj_bound = 0.01 * fn * fn;
  const double norm_bound = 10.0 * fn;
  int hit = 0;
  json traj = json::array();
  for (const AlsTracePoint& p : trace) {
    const bool both = p.objective < obj_bound && p.max_term_norm > norm_bound;
    if (both && hit == 0) hit = p.sweep;
    const double lg = std::log10(static_cast<double>(p.sweep));
    const bool sample = p.sweep <= 10 || std::abs(lg * 4.0 - std::round(lg * 4.0)) < 1e-9 || p.sweep == hit ||
                        p.sweep == static_cast<int>(trace.size());
    if (sample) traj.push_back({{"sweep", p.sweep}, {"objective", p.objective}, {"max_term_norm", p.max_term_norm}});
  }
  json& d = rep.data();
  d["seed"] = seed;
  d["norm_f"] = fn;
  d["k"] = 2;
  d["max_sweeps"] = max_sweeps;
  d["trajectory"] = traj;
  d["final"] = {{"objective", r.objective}, {"max_term_norm", r.max_term_norm}, {"sweeps", r.sweeps}};
  d["first_sweep_meeting_both_bounds"] = hit == 0 ? json(nullptr) : json(hit);
  rep.check("objective_below_0.01_norm_sq_with_term_norm_above_10_norm", hit > 0,
            {{"sweep", hit}, {"objective_bound", obj_bound}, {"norm_bound", norm_bound}});
  rep.check("term_norm_grows", r.max_term_norm > trace.front().max_term_norm,
            {{"first", trace.front().max_term_norm}, {"last", r.max_term_norm}});
  return rep;
}

json count_json(const TensorFormat& format) {
  json out = {{"format", format_string(format)}, {"count", count_critical_rank_one(format).str()}};
  if (format.factors() == 1) out["closed_form"] = symmetric_count_closed_form(format.degree(0), format.proj_dim(0)).str();
  if (format.is_matrix()) out["min_dims"] = std::min(format.dim(0), format.dim(1));
  return out;
}

json bott_json(int n, int q, int r, int k) {
  return json{{"n", n}, {"q", q}, {"r", r}, {"k", k}, {"h", bott_h(n, q, r, k).str()}};
}

json pair_json(const Tensor& f, const Tensor& g, int l) {
  if (!(f.format() == g.format())) throw InputError("pair: f and g have different formats");
  const AntisymElement p = pair_ell(f, g, l);
  const CMatrix M = p.matrix();
  json rows = json::array();
  for (Index i = 0; i < M.rows(); ++i) rows.push_back(vector_json(M.row(i).transpose()));
  return json{{"format", format_string(f.format())}, {"ell", l + 1}, {"matrix", rows}, {"norm", p.norm()}};
}

json critspace_json(const Tensor& f, const Tolerances& tol) {
  const CriticalSpace cs = critical_space(f, tol.rank);
  json basis = json::array();
  for (Index i = 0; i < cs.dim(); ++i) basis.push_back(tensor_json(cs.basis_tensor(i))["entries"]);
  return json{{"format", format_string(f.format())},
              {"dim_T", f.format().space_dim()},
              {"codim", cs.codim},
              {"dim", cs.dim()},
              {"expected_codim", expected_codim(f.format()).value},
              {"gap", std::isinf(cs.gap) ? json("inf") : json(cs.gap)},
              {"singular_values", real_vector_json(cs.singular_values)},
              {"f_membership", membership_residual(f, f)},
              {"basis", basis}};
}

json solve_json(const Tensor& f, const TrackerConfig& cfg) {
  const SolveResult res = solve_critical_rank_one(f, cfg);
  json pts = json::array();
  for (const CriticalPoint& p : res.points) pts.push_back(point_json(p));
  return json{{"format", format_string(f.format())},
              {"count", count_critical_rank_one(f.format()).str()},
              {"stats", path_stats_json(res.stats)},
              {"warnings", res.warnings},
              {"points", pts}};
}

json approx_json(const Tensor& f, int k, const AlsConfig& cfg) {
  const AlsResult r = als_critical_rank_k(f, k, cfg);
  json terms = json::array();
  for (const RankOneTerm& t : r.terms) {
    json vs = json::array();
    for (const RVector& v : t.vectors) vs.push_back(real_vector_json(v));
    terms.push_back({{"lambda", t.lambda}, {"vectors", vs}});
  }
  return json{{"format", format_string(f.format())},
              {"k", k},
              {"objective", r.objective},
              {"criticality_residual", r.criticality_residual},
              {"membership", r.g.is_zero() ? 0.0 : membership_residual(f, r.g)},
              {"sweeps", r.sweeps},
              {"restart", r.restart},
              {"max_term_norm", r.max_term_norm},
              {"terms", terms},
              {"g", tensor_json(r.g)}};
}

}  // namespace crit
