#pragma once

// Shared thermal types: the HVAC power map, the first-order grey-box zone
// model with exact discretization, and the occupancy-dependent comfort band.

#include <array>

#include "graphmpc/civil_time.hpp"

namespace graphmpc {

// Canonical device ordering for every length-4 vector in the project.
enum Device : int {
  kCoolingCoil = 0,
  kHeatingCoil = 1,
  kReheatCoil = 2,
  kRadiator = 3,
};
inline constexpr int kNumDevices = 4;

// Identified grey-box parameters of the first-order zone model.
struct RcParams {
  double c_z = 0.0;    // zone thermal capacitance [J/K]
  double r_w = 0.0;    // envelope thermal resistance [K/W]
  double alpha = 0.0;  // effective solar aperture [m^2]

  bool valid() const;
  void require_valid() const;
};

// Componentwise box for RcParams.
struct ParamBounds {
  RcParams lower;
  RcParams upper;

  bool contains(const RcParams& p) const;
  RcParams clamp(const RcParams& p) const;
  void require_valid() const;
};

// Nominal thermal powers and conversion efficiencies of the four devices.
struct HvacConfig {
  // Signed nominal thermal power [W]; negative for the cooling coil.
  std::array<double, kNumDevices> q_max_w{};
  // COP for the cooling coil, plain efficiency for the heating devices.
  std::array<double, kNumDevices> efficiency{};

  // Thermal power delivered by device j at full command [W], signed.
  double delivered_max_w(int device) const {
    return efficiency[device] * q_max_w[device];
  }
  void require_valid() const;
};

// Normalized device commands, each in [0, 1].
struct ControlVector {
  std::array<double, kNumDevices> u{};

  bool valid() const;
  void require_valid() const;
};

// Exogenous signals for one control step.
struct Disturbance {
  double t_amb = 0.0;  // ambient temperature [K]
  double h_glo = 0.0;  // global horizontal irradiation [W/m^2]
  double q_int = 0.0;  // internal gain density [W/m^2]
  double price = 0.0;  // electricity price [currency/kWh]
  bool occupied = false;
};

struct ZoneGeometry {
  double floor_area_m2 = 0.0;
  double volume_m3 = 0.0;

  void require_valid() const;
};

// Temperature band schedule. Occupied hours apply on weekdays over the
// half-open clock window [occupied_start_s, occupied_end_s); the occupied
// band must nest inside the relaxed one.
struct ComfortSchedule {
  double occupied_min = 294.15;    // [K]
  double occupied_max = 300.15;    // [K]
  double unoccupied_min = 290.15;  // [K]
  double unoccupied_max = 305.15;  // [K]
  int occupied_start_s = 8 * 3600;
  int occupied_end_s = 18 * 3600;

  void require_valid() const;
};

struct TempBand {
  double t_min = 0.0;  // [K]
  double t_max = 0.0;  // [K]
};

bool is_occupied(TimePoint t, const ComfortSchedule& sched);
TempBand comfort_bounds(TimePoint t, const ComfortSchedule& sched);

// Total thermal power delivered to the zone [W]; positive heats the zone.
double hvac_power(const ControlVector& u, const HvacConfig& cfg);

// Billed electrical cost rate [currency/h]. Each device is billed on the
// magnitude of its delivered thermal power, so cooling costs money too.
double electrical_cost_rate(const ControlVector& u, const HvacConfig& cfg,
                            double price_per_kwh);

// Decay factor exp(-dt / (r_w * c_z)) of the discretized model.
double rc_decay(const RcParams& p, double dt_s);

// Steady-state zone temperature for inputs held constant.
double rc_fixed_point(const ControlVector& u, const Disturbance& e,
                      const RcParams& p, const ZoneGeometry& geom,
                      const HvacConfig& cfg);

// One-step update of the zone temperature: exact solution of the scalar
// first-order model over dt_s with all inputs held constant.
double step_rc(double t_zone, const ControlVector& u, const Disturbance& e,
               const RcParams& p, const ZoneGeometry& geom,
               const HvacConfig& cfg, double dt_s);

}  // namespace graphmpc
