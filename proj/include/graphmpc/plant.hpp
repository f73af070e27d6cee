#pragma once

// Reference plant standing in for the real building. Two modes: a two-node
// network (zone air + envelope mass) that the controller's first-order model
// can only approximate, and a perfect mode that reuses the controller's own
// one-step update so model error is exactly zero.

#include <random>

#include "graphmpc/thermal.hpp"

namespace graphmpc {

struct PlantState {
  double t_zone = 293.15;  // zone air temperature [K]
  double t_mass = 293.15;  // envelope mass temperature [K]
};

struct PlantConfig {
  enum class Mode { kPerfectFirstOrder, kTwoNode };
  Mode mode = Mode::kTwoNode;

  // kPerfectFirstOrder: the plant integrates exactly these parameters.
  RcParams first_order{6.6003e6, 1.0 / 58.8, 4.2};

  // kTwoNode network. Defaults give a steady-state envelope conductance of
  // 58.8 W/K (20 through the direct path, 38.8 through the mass path),
  // matching the one-node fixture, but with dynamics the one-node model
  // cannot reproduce exactly.
  double r_direct = 0.05;             // zone air <-> ambient [K/W]
  double r_zone_mass = 0.010;         // zone air <-> mass [K/W]
  double r_mass_amb = 1.0 / 38.8 - 0.010;  // mass <-> ambient [K/W]
  double c_air = 1.0e6;               // [J/K]
  double c_mass = 12.0e6;             // [J/K]
  double solar_aperture_m2 = 4.6;     // total effective aperture
  double solar_air_fraction = 0.5;    // share of solar gain hitting the air node

  // Standard deviation of the zone sensor's measurement noise [K].
  double noise_sigma = 0.0;

  void require_valid() const;
};

// Exact one-step integration of the plant over dt_s with inputs held
// constant. HVAC and internal gains enter the air node; solar splits between
// air and mass. Throws SimulationError when the state leaves [243, 333] K.
PlantState plant_step(const PlantState& s, const ControlVector& u,
                      const Disturbance& e, const PlantConfig& cfg,
                      const ZoneGeometry& geom, const HvacConfig& hvac,
                      double dt_s);

// Zone air measurement; adds Gaussian noise when noise_sigma > 0.
double measure_zone_temp(const PlantState& s, const PlantConfig& cfg,
                         std::mt19937_64& rng);

// Constant-input fixed point of the two-node network.
PlantState plant_fixed_point(const ControlVector& u, const Disturbance& e,
                             const PlantConfig& cfg, const ZoneGeometry& geom,
                             const HvacConfig& hvac);

}  // namespace graphmpc
