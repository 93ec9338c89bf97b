#pragma once

// Real critical rank-at-most-k tensors g = sum_i lambda_i v_i1^{d_1} (x) ... (x) v_ip^{d_p}
// by block-coordinate descent on |f - g|^2 (weighted Hermitian norm of T).

#include <cstdint>
#include <utility>
#include <vector>

#include "crit/tensor_space.hpp"

namespace crit {

struct AlsConfig {
  std::uint64_t seed = 0;
  int restarts = 20;
  int max_sweeps = 10000;
  /// Stop once the relative objective decrease is below this and the point is critical.
  double rel_decrease = 1e-12;
  /// Criticality residual regarded as converged.
  double criticality_target = 1e-13;
  /// Sweeps without criticality improvement (after the decrease test passes) before giving up.
  int stall_sweeps = 200;
  /// Line search along the last sweep's displacement.
  bool extrapolate = true;
};

struct RankOneTerm {
  double lambda = 0.0;
  std::vector<RVector> vectors;  // unit vectors, one per factor
};

struct AlsTracePoint {
  int sweep = 0;
  double objective = 0.0;
  double max_term_norm = 0.0;
};

struct AlsResult {
  explicit AlsResult(Tensor g0) : g(std::move(g0)) {}

  Tensor g;
  double objective = 0.0;  // |f - g|^2
  double criticality_residual = 0.0;
  std::vector<RankOneTerm> terms;
  int sweeps = 0;
  int restart = 0;
  double max_term_norm = 0.0;
};

/// Best of cfg.restarts runs. k = 0 returns g = 0.
AlsResult als_critical_rank_k(const Tensor& f, int k, const AlsConfig& cfg = {});

/// A single run from the given starting terms; trace (optional) receives every sweep.
AlsResult als_run(const Tensor& f, std::vector<RankOneTerm> start, const AlsConfig& cfg,
                  std::vector<AlsTracePoint>* trace = nullptr, bool stop_when_critical = true);

std::vector<RankOneTerm> random_terms(const TensorFormat& format, int k, std::uint64_t seed);

/// |proj of (f - g) onto the span of the stacked tangent spaces of the terms| / |f|.
double criticality_residual(const Tensor& f, const Tensor& g, const std::vector<RankOneTerm>& terms);

Tensor terms_tensor(const BasisPtr& basis, const std::vector<RankOneTerm>& terms);

/// e1 e1 e2 + e1 e2 e1 + e2 e1 e1 in C^2 (x) C^2 (x) C^2.
Tensor w_tensor();

}  // namespace crit
