#include "crit/homotopy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

namespace crit {

namespace {

bool all_finite(const CVector& v) {
  for (Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) return false;
  return true;
}

class Homotopy {
 public:
  Homotopy(const PolynomialSystem& target, const TotalDegreeStart& start) : target_(target), start_(start) {}

  void evaluate(const CVector& z, double t, CVector& H, CMatrix* Hz, CVector* Ht) const {
    CVector f, g;
    CMatrix Jf, Jg;
    target_.evaluate(z, f, Hz ? &Jf : nullptr);
    start_.evaluate(z, g, Hz ? &Jg : nullptr);
    const cplx a = (1.0 - t) * start_.gamma;
    H = a * g + t * f;
    if (Hz) *Hz = a * Jg + t * Jf;
    if (Ht) *Ht = f - start_.gamma * g;
  }

  // dz/dt = -Hz^{-1} Ht
  bool velocity(const CVector& z, double t, CVector& dz) const {
    CVector H, Ht;
    CMatrix Hz;
    evaluate(z, t, H, &Hz, &Ht);
    dz = -Hz.partialPivLu().solve(Ht);
    return all_finite(dz);
  }

  bool predict(const CVector& z, double t, double h, CVector& out) const {
    CVector k1, k2, k3, k4;
    if (!velocity(z, t, k1)) return false;
    if (!velocity(z + (0.5 * h) * k1, t + 0.5 * h, k2)) return false;
    if (!velocity(z + (0.5 * h) * k2, t + 0.5 * h, k3)) return false;
    if (!velocity(z + h * k3, t + h, k4)) return false;
    out = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return all_finite(out);
  }

  bool correct(CVector& z, double t, const TrackerConfig& cfg) const {
    double prev = 0.0;
    for (int it = 0; it < cfg.max_newton_iterations; ++it) {
      CVector H;
      CMatrix Hz;
      evaluate(z, t, H, &Hz, nullptr);
      const CVector dz = Hz.partialPivLu().solve(H);
      if (!all_finite(dz)) return false;
      z -= dz;
      const double nd = dz.norm();
      if (it > 0 && nd > 0.5 * prev) return false;  // not contracting
      if (nd <= cfg.corrector_tol * (1.0 + z.norm())) return true;
      prev = nd;
    }
    return false;
  }

 private:
  const PolynomialSystem& target_;
  const TotalDegreeStart& start_;
};

}  // namespace

TotalDegreeStart TotalDegreeStart::random(const std::vector<int>& degrees, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  TotalDegreeStart s;
  s.degrees = degrees;
  s.r.resize(static_cast<Index>(degrees.size()));
  for (Index i = 0; i < s.r.size(); ++i) s.r(i) = std::polar(1.0, angle(rng));
  s.gamma = std::polar(1.0, angle(rng));
  return s;
}

std::size_t TotalDegreeStart::path_count() const {
  std::size_t n = 1;
  for (int d : degrees) n *= static_cast<std::size_t>(d);
  return n;
}

CVector TotalDegreeStart::start_point(std::size_t path) const {
  CVector z(static_cast<Index>(degrees.size()));
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    const int d = degrees[i];
    const std::size_t k = path % static_cast<std::size_t>(d);
    path /= static_cast<std::size_t>(d);
    const double mod = std::pow(std::abs(r(i)), 1.0 / d);
    const double arg = (std::arg(r(i)) + 2.0 * std::numbers::pi * static_cast<double>(k)) / d;
    z(i) = std::polar(mod, arg);
  }
  return z;
}

void TotalDegreeStart::evaluate(const CVector& z, CVector& value, CMatrix* jacobian) const {
  const Index n = z.size();
  value.resize(n);
  if (jacobian) jacobian->setZero(n, n);
  for (Index i = 0; i < n; ++i) {
    const int d = degrees[i];
    cplx pw(1.0, 0.0);
    for (int e = 0; e < d - 1; ++e) pw *= z(i);
    value(i) = pw * z(i) - r(i);
    if (jacobian) (*jacobian)(i, i) = static_cast<double>(d) * pw;
  }
}

bool newton_polish(const PolynomialSystem& target, CVector& z, double tol, int max_iterations) {
  for (int it = 0; it < max_iterations; ++it) {
    CVector F;
    CMatrix J;
    target.evaluate(z, F, &J);
    const CVector dz = J.partialPivLu().solve(F);
    if (!all_finite(dz)) return false;
    z -= dz;
    if (dz.norm() <= tol * (1.0 + z.norm())) return true;
  }
  return false;
}

PathResult track_path(const PolynomialSystem& target, const TotalDegreeStart& start, const CVector& z0,
                      const TrackerConfig& cfg) {
  const Homotopy hom(target, start);
  PathResult res;
  CVector z = z0;
  double t = 0.0;
  double h = cfg.initial_step;
  int successes = 0;
  // Norm at t_check vs t_end separates finite endpoints from paths running to infinity.
  const double t_check = 1.0 - 1e-4;
  double norm_at_check = -1.0;

  while (t < cfg.endgame_t) {
    if (res.steps + res.rejected >= cfg.max_steps) {
      res.status = PathStatus::kFailed;
      res.z = z;
      res.t_reached = t;
      return res;
    }
    const double target_t = t < t_check ? t_check : cfg.endgame_t;
    h = std::min({h, cfg.max_step, target_t - t});

    CVector zn;
    bool ok = hom.predict(z, t, h, zn);
    if (ok) ok = hom.correct(zn, t + h, cfg);
    if (ok) {
      z = std::move(zn);
      t = (target_t - (t + h) < 1e-15) ? target_t : t + h;
      ++res.steps;
      if (++successes >= 3) {
        h *= 2.0;
        successes = 0;
      }
      if (norm_at_check < 0.0 && t >= t_check) norm_at_check = z.norm();
      if (z.norm() > cfg.divergence_threshold) {
        res.status = PathStatus::kDiverged;
        res.z = z;
        res.t_reached = t;
        return res;
      }
    } else {
      ++res.rejected;
      successes = 0;
      h *= 0.5;
      if (h < cfg.min_step) {
        res.status = z.norm() > 1e4 ? PathStatus::kDiverged : PathStatus::kFailed;
        res.z = z;
        res.t_reached = t;
        return res;
      }
    }
  }
  res.t_reached = t;

  if ((1.0 + z.norm()) > 2.0 * (1.0 + std::max(norm_at_check, 0.0))) {
    res.status = PathStatus::kDiverged;
    res.z = z;
    return res;
  }
  if (newton_polish(target, z, cfg.newton_tol, cfg.max_endgame_iterations)) {
    res.status = PathStatus::kConverged;
  } else {
    res.status = PathStatus::kFailed;
  }
  res.z = z;
  return res;
}

std::vector<PathResult> track_all(const PolynomialSystem& target, const TotalDegreeStart& start,
                                  const TrackerConfig& cfg) {
  const std::size_t n = start.path_count();
  std::vector<PathResult> out(n);
  const int workers = std::max(1, std::min<int>(cfg.threads, static_cast<int>(n)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) out[i] = track_path(target, start, start.start_point(i), cfg);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace crit
