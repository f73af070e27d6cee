#pragma once

// Rule-based baseline controller: a staged proportional thermostat. Heating
// demand within a proportional band below the lower comfort bound engages
// the radiator, then the heating coil, then the reheat coil; cooling
// modulates the cooling coil over a band below the upper bound. Outside
// occupied hours the weekend is free-floating and weekday nights track the
// relaxed band.

#include "graphmpc/thermal.hpp"

namespace graphmpc {

struct RbcConfig {
  double proportional_band = 0.5;  // [K] per stage
  // Weekends: no conditioning at all when true.
  bool weekend_off = true;

  void require_valid() const;
};

// Stateless control law; repeated calls with the same arguments return the
// same command, and the command varies continuously with the temperature.
ControlVector rbc_step(double t_zone, TimePoint now,
                       const ComfortSchedule& sched, const RbcConfig& cfg);

}  // namespace graphmpc
