#pragma once

// Straight-line total-degree homotopy H(z, t) = (1 - t) gamma G(z) + t F(z) with
// start system G_i(z) = z_i^{deg_i} - r_i, tracked by an RK4 predictor and a Newton
// corrector with adaptive steps.

#include <cstdint>
#include <vector>

#include "crit/linalg.hpp"

namespace crit {

/// Square polynomial system F: C^n -> C^n.
class PolynomialSystem {
 public:
  virtual ~PolynomialSystem() = default;
  virtual int size() const = 0;
  /// Total degree of every equation.
  virtual std::vector<int> degrees() const = 0;
  /// value = F(z); jacobian (if non-null) = dF/dz.
  virtual void evaluate(const CVector& z, CVector& value, CMatrix* jacobian) const = 0;
};

struct TrackerConfig {
  std::uint64_t seed = 0;
  double initial_step = 0.05;
  double min_step = 1e-14;
  double max_step = 0.1;
  /// Endgame Newton: stop when |dz| <= newton_tol (1 + |z|).
  double newton_tol = 1e-12;
  int max_newton_iterations = 3;  // per correction
  int max_endgame_iterations = 50;
  /// Corrector acceptance while tracking, relative to 1 + |z|.
  double corrector_tol = 1e-9;
  double divergence_threshold = 1e8;
  double endgame_t = 1.0 - 1e-6;
  double dedupe_distance = 1e-6;
  int max_steps = 200000;
  int threads = 1;
};

enum class PathStatus { kConverged, kDiverged, kFailed };

struct PathResult {
  PathStatus status = PathStatus::kFailed;
  CVector z;           // endpoint (at t = 1 when converged)
  double t_reached = 0.0;
  int steps = 0;
  int rejected = 0;
};

struct TotalDegreeStart {
  std::vector<int> degrees;
  CVector r;   // G_i(z) = z_i^{deg_i} - r_i
  cplx gamma;

  static TotalDegreeStart random(const std::vector<int>& degrees, std::uint64_t seed);
  std::size_t path_count() const;
  /// The path-th start solution (mixed radix over the roots of unity).
  CVector start_point(std::size_t path) const;
  void evaluate(const CVector& z, CVector& value, CMatrix* jacobian) const;
};

PathResult track_path(const PolynomialSystem& target, const TotalDegreeStart& start, const CVector& z0,
                      const TrackerConfig& cfg);

/// Tracks every start path (optionally on cfg.threads workers); results are in path order.
std::vector<PathResult> track_all(const PolynomialSystem& target, const TotalDegreeStart& start,
                                  const TrackerConfig& cfg);

/// Plain Newton on F from z; returns true when the step criterion is met.
bool newton_polish(const PolynomialSystem& target, CVector& z, double tol, int max_iterations);

}  // namespace crit
