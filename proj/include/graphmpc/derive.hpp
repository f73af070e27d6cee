#pragma once

// Derives a complete controller setup from a building description graph:
// initial grey-box parameters and their bounds from envelope geometry, the
// HVAC device vectors from the heat- and air-distribution topology, sensor
// bindings and controller settings from zone metadata, and forecast file
// references.

#include <map>
#include <string>

#include "graphmpc/graph.hpp"
#include "graphmpc/mpc.hpp"
#include "graphmpc/thermal.hpp"

namespace graphmpc {

struct HyperParams {
  double trigger_threshold = 0.1;  // [K]
  int trigger_window = 288;        // steps
  int training_window = 2016;      // steps
  int horizon = 96;                // steps
  double dt_s = 300.0;
  double penalty_upper = 1000.0;
  double penalty_lower = 1000.0;

  void require_valid() const;
};

// Sensor binding roles, keys of ControllerSetup::sensor_bindings.
inline constexpr const char* kRoleZoneTemp = "zone_temperature";
inline constexpr const char* kRoleCoolingSetpoint = "cooling_setpoint";
inline constexpr const char* kRoleHeatingSetpoint = "heating_setpoint";
inline constexpr const char* kRoleOccupancy = "occupancy";

// Forecast kinds, keys of ControllerSetup::forecast_files.
inline constexpr const char* kForecastWeather = "weather";
inline constexpr const char* kForecastPrice = "price";
inline constexpr const char* kForecastOccupancy = "occupancy";

struct ControllerSetup {
  std::string zone_iri;
  RcParams initial_params;
  ParamBounds bounds;
  HvacConfig hvac;
  ZoneGeometry geom;
  ComfortSchedule schedule;
  HyperParams hyper;
  double occupant_gain_w_m2 = 0.0;
  std::map<std::string, std::string> sensor_bindings;  // role -> series id
  std::map<std::string, std::string> forecast_files;   // kind -> file name
};

// The unique zone instance of the graph; zero or several is an error.
std::string find_zone(const Graph& g);

// Envelope-based warm start: resistance from the parallel combination of
// element U*A conductances, capacitance from areal heat capacities plus the
// air volume, aperture from glazing g-value times area. Bounds span a fixed
// factor of 10 either side.
std::pair<RcParams, ParamBounds> derive_rc_initial(const Graph& g,
                                                   const std::string& zone);

// Devices serving the zone: the radiator through its heat-transfer edge,
// the coils by walking the air supply chain backwards from the zone.
HvacConfig derive_hvac(const Graph& g, const std::string& zone);

ZoneGeometry derive_geometry(const Graph& g, const std::string& zone);

// role -> time-series identifier for every required point role; missing or
// ambiguous points are errors.
std::map<std::string, std::string> derive_bindings(const Graph& g,
                                                   const std::string& zone);

// Controller settings node attached to the zone: threshold, window lengths
// (converted from wall-clock durations to steps), comfort band and occupied
// hours, penalties, occupant gain density.
std::pair<HyperParams, ComfortSchedule> derive_settings(
    const Graph& g, const std::string& zone);

double derive_occupant_gain(const Graph& g, const std::string& zone);

std::map<std::string, std::string> derive_forecast_files(const Graph& g);

ControllerSetup derive_setup(const Graph& g);

// Synthetic graph describing the setup; deriving it again reproduces the
// setup (up to floating-point round-trip of the envelope aggregation).
Graph to_graph(const ControllerSetup& s);

// Query listing a zone's points with their quantity kinds and series ids
// (variables ?point, ?quantity, ?id).
QueryPattern zone_points_query(const std::string& zone_iri);

// Query listing forecast instances and their files (?forecast, ?file).
QueryPattern forecast_files_query();

}  // namespace graphmpc
