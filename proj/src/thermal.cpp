#include "graphmpc/thermal.hpp"

#include <cmath>

#include "graphmpc/errors.hpp"

namespace graphmpc {

bool RcParams::valid() const {
  return std::isfinite(c_z) && std::isfinite(r_w) && std::isfinite(alpha) &&
         c_z > 0.0 && r_w > 0.0 && alpha >= 0.0;
}

void RcParams::require_valid() const {
  if (!valid())
    throw ValidationError("grey-box parameters must satisfy c_z > 0, r_w > 0, "
                          "alpha >= 0 and be finite");
}

bool ParamBounds::contains(const RcParams& p) const {
  return p.c_z >= lower.c_z && p.c_z <= upper.c_z && p.r_w >= lower.r_w &&
         p.r_w <= upper.r_w && p.alpha >= lower.alpha && p.alpha <= upper.alpha;
}

RcParams ParamBounds::clamp(const RcParams& p) const {
  auto clip = [](double v, double lo, double hi) {
    return v < lo ? lo : (v > hi ? hi : v);
  };
  return RcParams{clip(p.c_z, lower.c_z, upper.c_z),
                  clip(p.r_w, lower.r_w, upper.r_w),
                  clip(p.alpha, lower.alpha, upper.alpha)};
}

void ParamBounds::require_valid() const {
  lower.require_valid();
  upper.require_valid();
  if (lower.c_z > upper.c_z || lower.r_w > upper.r_w ||
      lower.alpha > upper.alpha)
    throw ValidationError("parameter bounds are inverted");
}

void HvacConfig::require_valid() const {
  for (int j = 0; j < kNumDevices; ++j) {
    if (!std::isfinite(q_max_w[j]) || !std::isfinite(efficiency[j]))
      throw ValidationError("HVAC config contains non-finite entries");
    if (efficiency[j] <= 0.0)
      throw ValidationError("HVAC efficiencies must be positive");
  }
  if (q_max_w[kCoolingCoil] > 0.0)
    throw ValidationError("cooling coil nominal power must be negative");
  for (int j : {kHeatingCoil, kReheatCoil, kRadiator})
    if (q_max_w[j] < 0.0)
      throw ValidationError("heating device nominal power must be nonnegative");
}

bool ControlVector::valid() const {
  for (double v : u)
    if (!(v >= 0.0 && v <= 1.0)) return false;
  return true;
}

void ControlVector::require_valid() const {
  if (!valid())
    throw ValidationError("control commands must lie in [0, 1]");
}

void ZoneGeometry::require_valid() const {
  if (!(floor_area_m2 > 0.0) || !(volume_m3 > 0.0))
    throw ValidationError("zone geometry must have positive area and volume");
}

void ComfortSchedule::require_valid() const {
  if (!(occupied_min < occupied_max))
    throw ValidationError("occupied comfort band is empty");
  if (!(unoccupied_min <= occupied_min && occupied_max <= unoccupied_max))
    throw ValidationError("occupied band must nest inside the unoccupied one");
  if (!(0 <= occupied_start_s && occupied_start_s < occupied_end_s &&
        occupied_end_s <= kSecondsPerDay))
    throw ValidationError("occupied clock window is invalid");
}

bool is_occupied(TimePoint t, const ComfortSchedule& sched) {
  if (is_weekend(t)) return false;
  const int s = seconds_of_day(t);
  return s >= sched.occupied_start_s && s < sched.occupied_end_s;
}

TempBand comfort_bounds(TimePoint t, const ComfortSchedule& sched) {
  if (is_occupied(t, sched))
    return TempBand{sched.occupied_min, sched.occupied_max};
  return TempBand{sched.unoccupied_min, sched.unoccupied_max};
}

double hvac_power(const ControlVector& u, const HvacConfig& cfg) {
  u.require_valid();
  double q = 0.0;
  for (int j = 0; j < kNumDevices; ++j) q += cfg.delivered_max_w(j) * u.u[j];
  return q;
}

double electrical_cost_rate(const ControlVector& u, const HvacConfig& cfg,
                            double price_per_kwh) {
  u.require_valid();
  if (!(price_per_kwh >= 0.0))
    throw ValidationError("electricity price must be nonnegative");
  double kw = 0.0;
  for (int j = 0; j < kNumDevices; ++j)
    kw += std::abs(cfg.delivered_max_w(j)) * u.u[j] / 1000.0;
  return kw * price_per_kwh;
}

double rc_decay(const RcParams& p, double dt_s) {
  p.require_valid();
  if (!(dt_s > 0.0)) throw ValidationError("time step must be positive");
  return std::exp(-dt_s / (p.r_w * p.c_z));
}

double rc_fixed_point(const ControlVector& u, const Disturbance& e,
                      const RcParams& p, const ZoneGeometry& geom,
                      const HvacConfig& cfg) {
  const double gains = hvac_power(u, cfg) + e.q_int * geom.floor_area_m2 +
                       p.alpha * e.h_glo;
  return e.t_amb + p.r_w * gains;
}

double step_rc(double t_zone, const ControlVector& u, const Disturbance& e,
               const RcParams& p, const ZoneGeometry& geom,
               const HvacConfig& cfg, double dt_s) {
  const double a = rc_decay(p, dt_s);
  const double t_ss = rc_fixed_point(u, e, p, geom, cfg);
  const double next = a * t_zone + (1.0 - a) * t_ss;
  if (!std::isfinite(next))
    throw SimulationError("zone temperature update is non-finite");
  return next;
}

}  // namespace graphmpc
