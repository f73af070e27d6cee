#include "graphmpc/sysid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "graphmpc/errors.hpp"

namespace graphmpc {

namespace {

struct ResidualTerms {
  double value = 0.0;
  // Partials of the one-step prediction wrt (c_z, r_w, alpha); the residual's
  // partials are the negatives.
  Eigen::Vector3d pred_grad = Eigen::Vector3d::Zero();
};

ResidualTerms residual_at(const StepRecord& rec, double t_next,
                          const RcParams& p, const ZoneGeometry& geom,
                          const HvacConfig& cfg, double dt) {
  const double a = std::exp(-dt / (p.r_w * p.c_z));
  const double gains = hvac_power(rec.u, cfg) +
                       rec.e.q_int * geom.floor_area_m2 + p.alpha * rec.e.h_glo;
  const double t_ss = rec.e.t_amb + p.r_w * gains;
  const double pred = a * rec.t_zone + (1.0 - a) * t_ss;

  ResidualTerms out;
  out.value = t_next - pred;
  const double da_dcz = a * dt / (p.r_w * p.c_z * p.c_z);
  const double da_drw = a * dt / (p.r_w * p.r_w * p.c_z);
  const double dpred_da = rec.t_zone - t_ss;
  out.pred_grad[0] = dpred_da * da_dcz;
  out.pred_grad[1] = dpred_da * da_drw + (1.0 - a) * gains;
  out.pred_grad[2] = (1.0 - a) * p.r_w * rec.e.h_glo;
  return out;
}

double variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(v.size());
}

using Vec3 = Eigen::Vector3d;

Vec3 to_log(const RcParams& p) {
  return Vec3(std::log(p.c_z), std::log(p.r_w), std::log(p.alpha));
}

RcParams from_log(const Vec3& z) {
  return RcParams{std::exp(z[0]), std::exp(z[1]), std::exp(z[2])};
}

// Weighted normal equations in log space: H = J^T W J, g = J^T W r where J
// is the Jacobian of the residual vector wrt log parameters.
void accumulate_normal_equations(const TrainingWindow& w, const RcParams& p,
                                 const SysIdConfig& cfg,
                                 const ZoneGeometry& geom,
                                 const HvacConfig& hvac, Eigen::Matrix3d* h,
                                 Vec3* g, double* obj) {
  const int n = static_cast<int>(w.records.size()) - 1;
  const Vec3 scale(p.c_z, p.r_w, p.alpha);
  h->setZero();
  g->setZero();
  *obj = 0.0;
  for (int i = 0; i < n; ++i) {
    const ResidualTerms t = residual_at(w.records[i], w.records[i + 1].t_zone,
                                        p, geom, hvac, w.dt_s);
    const double xi = residual_weight(cfg.forgetting, i, n);
    const Vec3 jac = -(t.pred_grad.cwiseProduct(scale));
    *h += xi * jac * jac.transpose();
    *g += xi * jac * t.value;
    *obj += xi * t.value * t.value;
  }
}

struct LocalResult {
  Vec3 z;
  double objective;
  int iterations;
};

LocalResult minimize_from(const TrainingWindow& w, const RcParams& start,
                          const SysIdConfig& cfg, const ZoneGeometry& geom,
                          const HvacConfig& hvac, const Vec3& zlo,
                          const Vec3& zhi) {
  Vec3 z = to_log(cfg.bounds.clamp(start)).cwiseMax(zlo).cwiseMin(zhi);
  Eigen::Matrix3d h;
  Vec3 g;
  double obj;
  accumulate_normal_equations(w, from_log(z), cfg, geom, hvac, &h, &g, &obj);

  double damping = 1e-3;
  int accepted = 0;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    // Projected first-order stationarity: gradient components pointing out
    // of the box at an active bound do not count.
    Vec3 pg = g;
    for (int k = 0; k < 3; ++k) {
      if (z[k] <= zlo[k] + 1e-14 && g[k] > 0.0) pg[k] = 0.0;
      if (z[k] >= zhi[k] - 1e-14 && g[k] < 0.0) pg[k] = 0.0;
    }
    if (pg.lpNorm<Eigen::Infinity>() < 1e-13 * (1.0 + obj)) break;

    bool moved = false;
    while (damping < 1e12) {
      Eigen::Matrix3d damped = h;
      for (int k = 0; k < 3; ++k)
        damped(k, k) += damping * std::max(h(k, k), 1e-12);
      const Vec3 delta = damped.ldlt().solve(-g);
      const Vec3 z_try = (z + delta).cwiseMax(zlo).cwiseMin(zhi);

      Eigen::Matrix3d h_try;
      Vec3 g_try;
      double obj_try;
      accumulate_normal_equations(w, from_log(z_try), cfg, geom, hvac, &h_try,
                                  &g_try, &obj_try);
      if (obj_try < obj) {
        const double step = (z_try - z).lpNorm<Eigen::Infinity>();
        z = z_try;
        h = h_try;
        g = g_try;
        obj = obj_try;
        damping = std::max(damping / 3.0, 1e-12);
        ++accepted;
        moved = step >= cfg.step_tolerance;
        break;
      }
      damping *= 10.0;
    }
    if (!moved) break;
  }
  return LocalResult{z, obj, accepted};
}

}  // namespace

void TrainingWindow::require_valid() const {
  if (records.size() < 2)
    throw ValidationError("training window needs at least two records");
  if (!(dt_s > 0.0))
    throw ValidationError("training window step must be positive");
  for (const StepRecord& r : records) {
    if (!std::isfinite(r.t_zone))
      throw ValidationError("training window contains non-finite temperature");
    r.u.require_valid();
  }
}

void SysIdConfig::require_valid() const {
  bounds.require_valid();
  if (!(bounds.lower.c_z > 0.0 && bounds.lower.r_w > 0.0 &&
        bounds.lower.alpha > 0.0))
    throw ValidationError("identification bounds must be strictly positive");
  if (!(forgetting > 0.0 && forgetting <= 1.0))
    throw ValidationError("forgetting factor must lie in (0, 1]");
  if (max_iterations < 1 || multistart < 1)
    throw ValidationError("iteration and multistart counts must be positive");
  if (!(step_tolerance > 0.0))
    throw ValidationError("step tolerance must be positive");
}

std::vector<double> residuals(const TrainingWindow& w, const RcParams& p,
                              const ZoneGeometry& geom, const HvacConfig& cfg) {
  w.require_valid();
  p.require_valid();
  std::vector<double> out;
  out.reserve(w.records.size() - 1);
  for (std::size_t i = 0; i + 1 < w.records.size(); ++i)
    out.push_back(residual_at(w.records[i], w.records[i + 1].t_zone, p, geom,
                              cfg, w.dt_s)
                      .value);
  return out;
}

double residual_weight(double forgetting, int i, int n) {
  return std::pow(forgetting, n - 1 - i);
}

double objective(const TrainingWindow& w, const RcParams& p,
                 const SysIdConfig& cfg, const ZoneGeometry& geom,
                 const HvacConfig& hvac) {
  const std::vector<double> r = residuals(w, p, geom, hvac);
  const int n = static_cast<int>(r.size());
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    acc += residual_weight(cfg.forgetting, i, n) * r[i] * r[i];
  return acc;
}

Eigen::Vector3d objective_gradient(const TrainingWindow& w, const RcParams& p,
                                   const SysIdConfig& cfg,
                                   const ZoneGeometry& geom,
                                   const HvacConfig& hvac) {
  w.require_valid();
  const int n = static_cast<int>(w.records.size()) - 1;
  Vec3 g = Vec3::Zero();
  for (int i = 0; i < n; ++i) {
    const ResidualTerms t = residual_at(w.records[i], w.records[i + 1].t_zone,
                                        p, geom, hvac, w.dt_s);
    g += residual_weight(cfg.forgetting, i, n) * 2.0 * t.value *
         (-t.pred_grad);
  }
  return g;
}

FitResult fit(const TrainingWindow& w, const RcParams& warm_start,
              const SysIdConfig& cfg, const ZoneGeometry& geom,
              const HvacConfig& hvac) {
  w.require_valid();
  cfg.require_valid();
  warm_start.require_valid();
  if (w.records.size() < 5)
    throw ValidationError("training window too short to identify three "
                          "parameters");

  const int n = static_cast<int>(w.records.size()) - 1;
  std::vector<double> temps, powers;
  temps.reserve(n);
  powers.reserve(n);
  for (int i = 0; i < n; ++i) {
    temps.push_back(w.records[i].t_zone);
    powers.push_back(hvac_power(w.records[i].u, hvac));
  }
  if (variance(temps) < cfg.min_temp_variance &&
      variance(powers) < cfg.min_power_variance) {
    FitResult out;
    out.status = FitStatus::kInsufficientExcitation;
    out.params = cfg.bounds.clamp(warm_start);
    out.objective = objective(w, out.params, cfg, geom, hvac);
    return out;
  }

  const Vec3 zlo = to_log(cfg.bounds.lower);
  const Vec3 zhi = to_log(cfg.bounds.upper);

  std::vector<RcParams> starts;
  starts.push_back(warm_start);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 1; s < cfg.multistart; ++s) {
    Vec3 z;
    for (int k = 0; k < 3; ++k) z[k] = zlo[k] + unit(rng) * (zhi[k] - zlo[k]);
    starts.push_back(from_log(z));
  }

  FitResult best;
  best.objective = std::numeric_limits<double>::infinity();
  int total_iters = 0;
  for (const RcParams& s : starts) {
    const LocalResult local = minimize_from(w, s, cfg, geom, hvac, zlo, zhi);
    total_iters += local.iterations;
    if (local.objective < best.objective) {
      best.objective = local.objective;
      best.params = from_log(local.z);
    }
  }
  best.status = FitStatus::kOk;
  best.iterations = total_iters;

  const std::vector<double> r = residuals(w, best.params, geom, hvac);
  double acc = 0.0;
  for (double v : r) acc += v * v;
  best.rmse = std::sqrt(acc / static_cast<double>(r.size()));
  return best;
}

}  // namespace graphmpc
