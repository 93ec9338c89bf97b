#pragma once

// End-to-end experiments and the JSON reports behind the command line tool.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "crit/als.hpp"
#include "crit/critical_solver.hpp"
#include "crit/counting.hpp"

namespace crit {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

struct Tolerances {
  double rank = 1e-8;          // relative singular-value cut
  double member = 1e-8;        // membership of critical rank-one tensors in H_f
  double newton = 1e-10;       // relative residual of the critical equations
  double span = 1e-8;          // least-squares and subspace residuals
  double f_member = 1e-12;     // membership of f itself
  double perp = 1e-8;          // f - c x perpendicular to the tangent space
  double gap = 1e4;            // minimum spectral gap of the constraint map
  double svd_match = 1e-6;     // homotopy points vs SVD singular pairs
  double truncation = 1e-10;   // membership of SVD truncations of a matrix
  double eckart_young = 1e-8;  // ALS objective vs SVD tail, relative to |f|^2
  double als_critical = 1e-8;  // ALS criticality needed before membership is asserted
  double als_member = 1e-6;

  nlohmann::json to_json() const;
};

class Report {
 public:
  explicit Report(std::string command);

  nlohmann::json& data() { return data_; }
  const nlohmann::json& data() const { return data_; }

  /// kind is "theorem" or "observation"; both count towards passed().
  bool check_le(const std::string& name, double value, double tol, const std::string& kind = "theorem");
  bool check_ge(const std::string& name, double value, double bound, const std::string& kind = "theorem");
  bool check_eq(const std::string& name, long long value, long long expected, const std::string& kind = "theorem");
  bool check(const std::string& name, bool ok, const nlohmann::json& value, const std::string& kind = "theorem");

  bool passed() const;
  const nlohmann::json& assertions() const { return assertions_; }
  nlohmann::json to_json() const;

 private:
  bool record(nlohmann::json a);

  std::string command_;
  nlohmann::json data_ = nlohmann::json::object();
  nlohmann::json assertions_ = nlohmann::json::array();
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  Tolerances tol;
  int threads = 1;
  int restarts = 20;
  std::vector<int> als_ranks{1, 2};
  long long max_paths = 100000;
};

/// Random real f of the format; H_f, the solver, counts, spans and ALS, all asserted.
Report cmd_verify(const TensorFormat& format, const VerifyOptions& opt);

/// The 2x2x4 experiment where the triangle inequality fails for the last factor.
Report cmd_experiment_2x2x4(const VerifyOptions& opt);

/// Rank-2 ALS on the W tensor; factors diverge while the objective tends to 0.
Report cmd_demo_wtensor(std::uint64_t seed, int max_sweeps = 10000);

nlohmann::json point_json(const CriticalPoint& p);
nlohmann::json path_stats_json(const PathStats& s);

nlohmann::json count_json(const TensorFormat& format);
nlohmann::json bott_json(int n, int q, int r, int k);
/// l is 0-based here.
nlohmann::json pair_json(const Tensor& f, const Tensor& g, int l);
nlohmann::json critspace_json(const Tensor& f, const Tolerances& tol);
nlohmann::json solve_json(const Tensor& f, const TrackerConfig& cfg);
nlohmann::json approx_json(const Tensor& f, int k, const AlsConfig& cfg);

/// Weighted-coordinate matrix of the scaled critical tensors and the relative residual
/// of f against their span.
struct SpanCheck {
  int rank = 0;
  double f_residual = 0.0;
  double distance_to_H = 1.0;  // subspace distance to H_f
};
SpanCheck span_check(const Tensor& f, const std::vector<CriticalPoint>& points, const CMatrix& H_basis,
                     double rank_tol);

}  // namespace crit
