#include "graphmpc/rbc.hpp"

#include <algorithm>
#include <cmath>

#include "graphmpc/errors.hpp"

namespace graphmpc {

void RbcConfig::require_valid() const {
  if (!(proportional_band > 0.0))
    throw ValidationError("proportional band must be positive");
}

ControlVector rbc_step(double t_zone, TimePoint now,
                       const ComfortSchedule& sched, const RbcConfig& cfg) {
  cfg.require_valid();
  sched.require_valid();
  if (!std::isfinite(t_zone))
    throw ValidationError("thermostat input temperature is non-finite");

  ControlVector out;
  if (cfg.weekend_off && is_weekend(now)) return out;

  const TempBand band = comfort_bounds(now, sched);
  const double db = cfg.proportional_band;

  // Stacked heating stages: one proportional band each, engaged in order
  // radiator, heating coil, reheat coil as the temperature falls below the
  // heating setpoint.
  const double heat_demand =
      std::clamp((band.t_min + db - t_zone) / db, 0.0, 3.0);
  static const int kStageOrder[] = {kRadiator, kHeatingCoil, kReheatCoil};
  for (int s = 0; s < 3; ++s) {
    const double stage = std::clamp(heat_demand - s, 0.0, 1.0);
    out.u[kStageOrder[s]] = stage;
  }

  // Cooling modulates over one band below the cooling setpoint.
  const double cool_demand =
      std::clamp((t_zone - (band.t_max - db)) / db, 0.0, 1.0);
  // Heating and cooling bands never overlap for sane schedules, but guard
  // against simultaneous commands anyway.
  if (heat_demand > 0.0 && cool_demand > 0.0) return out;
  out.u[kCoolingCoil] = cool_demand;
  return out;
}

}  // namespace graphmpc
