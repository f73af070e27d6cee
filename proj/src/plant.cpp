#include "graphmpc/plant.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "graphmpc/errors.hpp"

namespace graphmpc {

namespace {

constexpr double kMinPlausibleK = 243.0;
constexpr double kMaxPlausibleK = 333.0;

struct Affine2 {
  Eigen::Matrix2d a;
  Eigen::Vector2d b;
};

Affine2 two_node_dynamics(const Disturbance& e, const PlantConfig& cfg,
                          const ZoneGeometry& geom, const HvacConfig& hvac,
                          const ControlVector& u) {
  const double g_d = 1.0 / cfg.r_direct;
  const double g_zm = 1.0 / cfg.r_zone_mass;
  const double g_ma = 1.0 / cfg.r_mass_amb;
  const double solar = cfg.solar_aperture_m2 * e.h_glo;
  const double q_air = hvac_power(u, hvac) + e.q_int * geom.floor_area_m2 +
                       cfg.solar_air_fraction * solar;
  const double q_mass = (1.0 - cfg.solar_air_fraction) * solar;

  Affine2 d;
  d.a << -(g_d + g_zm) / cfg.c_air, g_zm / cfg.c_air,
      g_zm / cfg.c_mass, -(g_zm + g_ma) / cfg.c_mass;
  d.b << (g_d * e.t_amb + q_air) / cfg.c_air,
      (g_ma * e.t_amb + q_mass) / cfg.c_mass;
  return d;
}

// Exact step of x' = A x + b over dt via Putzer's form for 2x2 matrices:
// exp(A t) = e1 I + r (A - l1 I) with r = (e2 - e1) / (l2 - l1).
Eigen::Vector2d integrate_affine(const Affine2& d, const Eigen::Vector2d& x0,
                                 double dt) {
  const double tr = d.a.trace();
  const double det = d.a.determinant();
  const double disc = tr * tr - 4.0 * det;
  if (disc < 0.0)
    throw SimulationError("plant network has complex eigenvalues");
  const double root = std::sqrt(disc);
  const double l1 = 0.5 * (tr - root);
  const double l2 = 0.5 * (tr + root);

  auto phi = [](double l, double t) {
    // int_0^t exp(l s) ds, stable for small |l t|.
    if (std::abs(l * t) < 1e-8) return t * (1.0 + 0.5 * l * t);
    return (std::exp(l * t) - 1.0) / l;
  };

  const double e1 = std::exp(l1 * dt);
  double r, ri;  // r = Putzer weight, ri = its time integral
  if (std::abs(l2 - l1) > 1e-14 * std::max(std::abs(l1), 1.0)) {
    r = (std::exp(l2 * dt) - e1) / (l2 - l1);
    ri = (phi(l2, dt) - phi(l1, dt)) / (l2 - l1);
  } else {
    r = dt * e1;
    ri = 0.5 * dt * dt * e1;
  }

  const Eigen::Matrix2d shift = d.a - l1 * Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d expm = e1 * Eigen::Matrix2d::Identity() + r * shift;
  const Eigen::Matrix2d intm =
      phi(l1, dt) * Eigen::Matrix2d::Identity() + ri * shift;
  return expm * x0 + intm * d.b;
}

}  // namespace

void PlantConfig::require_valid() const {
  if (mode == Mode::kPerfectFirstOrder) {
    first_order.require_valid();
  } else {
    if (!(r_direct > 0.0 && r_zone_mass > 0.0 && r_mass_amb > 0.0 &&
          c_air > 0.0 && c_mass > 0.0))
      throw ValidationError("plant network values must be positive");
    if (!(solar_aperture_m2 >= 0.0) || solar_air_fraction < 0.0 ||
        solar_air_fraction > 1.0)
      throw ValidationError("plant solar parameters out of range");
  }
  if (!(noise_sigma >= 0.0))
    throw ValidationError("measurement noise sigma must be nonnegative");
}

PlantState plant_step(const PlantState& s, const ControlVector& u,
                      const Disturbance& e, const PlantConfig& cfg,
                      const ZoneGeometry& geom, const HvacConfig& hvac,
                      double dt_s) {
  PlantState next;
  if (cfg.mode == PlantConfig::Mode::kPerfectFirstOrder) {
    next.t_zone = step_rc(s.t_zone, u, e, cfg.first_order, geom, hvac, dt_s);
    next.t_mass = next.t_zone;
  } else {
    const Affine2 d = two_node_dynamics(e, cfg, geom, hvac, u);
    const Eigen::Vector2d x =
        integrate_affine(d, Eigen::Vector2d(s.t_zone, s.t_mass), dt_s);
    next.t_zone = x[0];
    next.t_mass = x[1];
  }
  if (!std::isfinite(next.t_zone) || !std::isfinite(next.t_mass) ||
      next.t_zone < kMinPlausibleK || next.t_zone > kMaxPlausibleK)
    throw SimulationError("plant state left the plausible temperature range");
  return next;
}

double measure_zone_temp(const PlantState& s, const PlantConfig& cfg,
                         std::mt19937_64& rng) {
  if (cfg.noise_sigma <= 0.0) return s.t_zone;
  std::normal_distribution<double> noise(0.0, cfg.noise_sigma);
  return s.t_zone + noise(rng);
}

PlantState plant_fixed_point(const ControlVector& u, const Disturbance& e,
                             const PlantConfig& cfg, const ZoneGeometry& geom,
                             const HvacConfig& hvac) {
  if (cfg.mode == PlantConfig::Mode::kPerfectFirstOrder) {
    const double t = rc_fixed_point(u, e, cfg.first_order, geom, hvac);
    return PlantState{t, t};
  }
  const Affine2 d = two_node_dynamics(e, cfg, geom, hvac, u);
  const Eigen::Vector2d x = d.a.partialPivLu().solve(-d.b);
  return PlantState{x[0], x[1]};
}

}  // namespace graphmpc
