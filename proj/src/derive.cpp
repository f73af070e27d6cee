#include "graphmpc/derive.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "graphmpc/errors.hpp"

namespace graphmpc {

namespace {

constexpr double kAirDensity = 1.2;        // [kg/m^3]
constexpr double kAirHeatCapacity = 1005;  // [J/(kg K)]
constexpr double kBoundsSpan = 10.0;       // bounds are theta0 / span .. theta0 * span
constexpr double kKelvinOffset = 273.15;

namespace vocab {
const std::string rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
const std::string bot = "https://w3id.org/bot#";
const std::string brick = "https://brickschema.org/schema/Brick#";
const std::string fso = "https://w3id.org/fso#";
const std::string props = "https://w3id.org/props#";
const std::string seas = "https://w3id.org/seas/";

const std::string type = rdf + "type";
const std::string zone_class = bot + "Zone";
const std::string adjacent_element = bot + "adjacentElement";

const std::string area = props + "area";
const std::string volume = props + "volume";
const std::string u_value = props + "uValue";
const std::string g_value = props + "gValue";
const std::string areal_heat_capacity = props + "arealHeatCapacity";
const std::string nominal_power = props + "nominalPower";
const std::string nominal_efficiency = props + "nominalEfficiency";

const std::string settings_class = props + "ControllerSettings";
const std::string controls_zone = props + "controlsZone";
const std::string trigger_threshold = props + "triggerThreshold";
const std::string error_horizon = props + "errorHorizon";
const std::string training_horizon = props + "trainingHorizon";
const std::string prediction_horizon = props + "predictionHorizon";
const std::string control_step = props + "controlStep";
const std::string comfort_min_occ = props + "comfortMinOccupied";
const std::string comfort_max_occ = props + "comfortMaxOccupied";
const std::string comfort_min_unocc = props + "comfortMinUnoccupied";
const std::string comfort_max_unocc = props + "comfortMaxUnoccupied";
const std::string occupancy_start = props + "occupancyStart";
const std::string occupancy_end = props + "occupancyEnd";
const std::string penalty_upper = props + "slackPenaltyUpper";
const std::string penalty_lower = props + "slackPenaltyLower";
const std::string occupant_gain = props + "occupantGainDensity";

const std::string transfers_heat_to = fso + "transfersHeatTo";
const std::string supplies_fluid_to = fso + "suppliesFluidTo";

const std::string radiator_class = brick + "Radiator";
const std::string cooling_coil_class = brick + "Cooling_Coil";
const std::string heating_coil_class = brick + "Heating_Coil";
const std::string reheat_coil_class = brick + "Reheat_Coil";

const std::string is_point_of = brick + "isPointOf";
const std::string has_quantity = brick + "hasQuantity";
const std::string has_series_id = brick + "hasTimeseriesID";
const std::string temp_sensor_class = brick + "Zone_Air_Temperature_Sensor";
const std::string cool_setpoint_class =
    brick + "Zone_Air_Cooling_Temperature_Setpoint";
const std::string heat_setpoint_class =
    brick + "Zone_Air_Heating_Temperature_Setpoint";
const std::string occupancy_sensor_class = brick + "Occupancy_Count_Sensor";
const std::string quantity_temperature = brick + "Temperature";
const std::string quantity_occupancy = brick + "Occupancy_Count";

const std::string forecast_class = seas + "Forecast";
const std::string weather_forecast_class = seas + "WeatherForecast";
const std::string price_forecast_class = seas + "PriceForecast";
const std::string occupancy_forecast_class = seas + "OccupancyForecast";
const std::string has_file = seas + "hasFile";
}  // namespace vocab

[[noreturn]] void missing(const std::string& node, const std::string& pred) {
  throw DeriveError("node <" + node + "> lacks a usable <" + pred +
                    "> value");
}

// Unique numeric object of (subject, predicate) with one of the allowed
// units ("" entries accept unit-less literals).
double numeric_prop(const Graph& g, const std::string& subject,
                    const std::string& pred,
                    const std::set<std::string>& units) {
  const std::vector<const Triple*> rows = g.with_predicate(pred);
  const Triple* hit = nullptr;
  for (const Triple* t : rows) {
    if (t->s.value != subject) continue;
    if (hit)
      throw DeriveError("node <" + subject + "> has several <" + pred +
                        "> values");
    hit = t;
  }
  if (!hit || !hit->o.number) missing(subject, pred);
  if (!units.empty() && !units.count(hit->o.unit))
    throw DeriveError("node <" + subject + "> property <" + pred +
                      "> has unsupported unit '" + hit->o.unit + "'");
  return *hit->o.number;
}

bool has_numeric_prop(const Graph& g, const std::string& subject,
                      const std::string& pred) {
  for (const Triple* t : g.with_predicate(pred))
    if (t->s.value == subject && t->o.number) return true;
  return false;
}

std::string unit_of(const Graph& g, const std::string& subject,
                    const std::string& pred) {
  for (const Triple* t : g.with_predicate(pred))
    if (t->s.value == subject) return t->o.unit;
  return "";
}

bool has_type(const Graph& g, const std::string& node,
              const std::string& cls) {
  return g.contains(Triple{Term::iri(node), Term::iri(vocab::type),
                           Term::iri(cls)});
}

std::vector<std::string> instances_of(const Graph& g,
                                      const std::string& cls) {
  std::vector<std::string> out;
  for (const Triple* t : g.with_predicate(vocab::type))
    if (t->o.kind == TermKind::kIri && t->o.value == cls)
      out.push_back(t->s.value);
  std::sort(out.begin(), out.end());
  return out;
}

// Converts a wall-clock duration to whole control steps.
int duration_steps(const Graph& g, const std::string& subject,
                   const std::string& pred, double dt_s) {
  const double v =
      numeric_prop(g, subject, pred, {"s", "min", "h", "day"});
  const std::string u = unit_of(g, subject, pred);
  double seconds = v;
  if (u == "min") seconds = v * 60.0;
  else if (u == "h") seconds = v * 3600.0;
  else if (u == "day") seconds = v * 86400.0;
  const double steps = seconds / dt_s;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 || rounded < 1.0)
    throw DeriveError("node <" + subject + "> property <" + pred +
                      "> is not a positive whole number of control steps");
  return static_cast<int>(rounded);
}

double temperature_prop(const Graph& g, const std::string& subject,
                        const std::string& pred) {
  const double v = numeric_prop(g, subject, pred, {"degC", "K"});
  return unit_of(g, subject, pred) == "degC" ? v + kKelvinOffset : v;
}

std::string settings_node(const Graph& g, const std::string& zone) {
  std::vector<std::string> hits;
  for (const Triple* t : g.with_predicate(vocab::controls_zone))
    if (t->o.kind == TermKind::kIri && t->o.value == zone &&
        has_type(g, t->s.value, vocab::settings_class))
      hits.push_back(t->s.value);
  if (hits.empty())
    throw DeriveError("zone <" + zone + "> has no controller settings node");
  if (hits.size() > 1)
    throw DeriveError("zone <" + zone +
                      "> has several controller settings nodes");
  return hits[0];
}

std::string point_for_role(const Graph& g, const std::string& zone,
                           const std::string& cls) {
  std::vector<std::string> hits;
  for (const Triple* t : g.with_predicate(vocab::is_point_of)) {
    if (t->o.kind != TermKind::kIri || t->o.value != zone) continue;
    if (has_type(g, t->s.value, cls)) hits.push_back(t->s.value);
  }
  std::sort(hits.begin(), hits.end());
  if (hits.empty())
    throw DeriveError("zone <" + zone + "> has no point of type <" + cls +
                      ">");
  if (hits.size() > 1)
    throw DeriveError("zone <" + zone + "> has ambiguous points of type <" +
                      cls + ">: <" + hits[0] + "> and <" + hits[1] + ">");
  return hits[0];
}

std::string series_id_of(const Graph& g, const std::string& point) {
  for (const Triple* t : g.with_predicate(vocab::has_series_id))
    if (t->s.value == point && t->o.kind == TermKind::kLiteral)
      return t->o.value;
  missing(point, vocab::has_series_id);
}

}  // namespace

void HyperParams::require_valid() const {
  if (!(trigger_threshold > 0.0))
    throw ValidationError("trigger threshold must be positive");
  if (trigger_window < 1 || training_window < 2 || horizon < 1)
    throw ValidationError("window lengths must be positive");
  if (!(dt_s > 0.0)) throw ValidationError("control step must be positive");
  if (!(penalty_upper > 0.0 && penalty_lower > 0.0))
    throw ValidationError("slack penalties must be positive");
}

std::string find_zone(const Graph& g) {
  const std::vector<std::string> zones =
      instances_of(g, vocab::zone_class);
  if (zones.empty()) throw DeriveError("graph describes no zone");
  if (zones.size() > 1)
    throw DeriveError("graph describes several zones: <" + zones[0] +
                      "> and <" + zones[1] + ">");
  return zones[0];
}

ZoneGeometry derive_geometry(const Graph& g, const std::string& zone) {
  ZoneGeometry geom;
  geom.floor_area_m2 = numeric_prop(g, zone, vocab::area, {"m2"});
  geom.volume_m3 = numeric_prop(g, zone, vocab::volume, {"m3"});
  geom.require_valid();
  return geom;
}

std::pair<RcParams, ParamBounds> derive_rc_initial(const Graph& g,
                                                   const std::string& zone) {
  const ZoneGeometry geom = derive_geometry(g, zone);

  std::vector<std::string> elements;
  for (const Triple* t : g.with_predicate(vocab::adjacent_element))
    if (t->s.value == zone && t->o.kind == TermKind::kIri)
      elements.push_back(t->o.value);
  std::sort(elements.begin(), elements.end());
  if (elements.empty())
    throw DeriveError("zone <" + zone + "> has no adjacent envelope elements");

  double conductance = 0.0;   // [W/K]
  double capacitance =        // [J/K]
      kAirDensity * kAirHeatCapacity * geom.volume_m3;
  double aperture = 0.0;      // [m^2]
  for (const std::string& el : elements) {
    const double area = numeric_prop(g, el, vocab::area, {"m2"});
    const double u = numeric_prop(g, el, vocab::u_value, {"W_per_m2K"});
    conductance += u * area;
    if (has_numeric_prop(g, el, vocab::areal_heat_capacity))
      capacitance +=
          area * numeric_prop(g, el, vocab::areal_heat_capacity,
                              {"J_per_m2K"});
    if (has_numeric_prop(g, el, vocab::g_value))
      aperture += area * numeric_prop(g, el, vocab::g_value, {""});
  }
  if (!(conductance > 0.0))
    throw DeriveError("zone <" + zone + "> envelope has no conductance");

  RcParams p;
  p.c_z = capacitance;
  p.r_w = 1.0 / conductance;
  p.alpha = aperture;
  p.require_valid();

  ParamBounds b;
  b.lower = RcParams{p.c_z / kBoundsSpan, p.r_w / kBoundsSpan,
                     p.alpha / kBoundsSpan};
  b.upper = RcParams{p.c_z * kBoundsSpan, p.r_w * kBoundsSpan,
                     p.alpha * kBoundsSpan};
  b.require_valid();
  return {p, b};
}

HvacConfig derive_hvac(const Graph& g, const std::string& zone) {
  // slot -> (class IRI, found device)
  struct Slot {
    const std::string& cls;
    std::string device;
  };
  Slot slots[kNumDevices] = {
      {vocab::cooling_coil_class, ""},
      {vocab::heating_coil_class, ""},
      {vocab::reheat_coil_class, ""},
      {vocab::radiator_class, ""},
  };

  auto claim = [&](int slot, const std::string& device) {
    if (!slots[slot].device.empty() && slots[slot].device != device)
      throw DeriveError("zone has several devices of type <" +
                        slots[slot].cls + ">: <" + slots[slot].device +
                        "> and <" + device + ">");
    slots[slot].device = device;
  };

  for (const Triple* t : g.with_predicate(vocab::transfers_heat_to))
    if (t->o.kind == TermKind::kIri && t->o.value == zone &&
        has_type(g, t->s.value, vocab::radiator_class))
      claim(kRadiator, t->s.value);

  // Walk the air-supply chain backwards from the zone.
  std::set<std::string> visited{zone};
  std::vector<std::string> frontier{zone};
  for (int depth = 0; depth < 4 && !frontier.empty(); ++depth) {
    std::vector<std::string> next;
    for (const Triple* t : g.with_predicate(vocab::supplies_fluid_to)) {
      if (t->o.kind != TermKind::kIri || !visited.count(t->o.value)) continue;
      const std::string& src = t->s.value;
      if (visited.count(src)) continue;
      if (has_type(g, src, vocab::cooling_coil_class))
        claim(kCoolingCoil, src);
      else if (has_type(g, src, vocab::heating_coil_class))
        claim(kHeatingCoil, src);
      else if (has_type(g, src, vocab::reheat_coil_class))
        claim(kReheatCoil, src);
      next.push_back(src);
      visited.insert(src);
    }
    frontier = std::move(next);
  }

  HvacConfig cfg;
  for (int j = 0; j < kNumDevices; ++j) {
    if (slots[j].device.empty())
      throw DeriveError("zone <" + zone + "> is served by no device of type <" +
                        slots[j].cls + ">");
    cfg.q_max_w[j] =
        numeric_prop(g, slots[j].device, vocab::nominal_power, {"W"});
    cfg.efficiency[j] =
        numeric_prop(g, slots[j].device, vocab::nominal_efficiency, {""});
  }
  try {
    cfg.require_valid();
  } catch (const ValidationError& e) {
    throw DeriveError(std::string("derived HVAC config is invalid: ") +
                      e.what());
  }
  return cfg;
}

std::map<std::string, std::string> derive_bindings(const Graph& g,
                                                   const std::string& zone) {
  const std::pair<const char*, const std::string*> roles[] = {
      {kRoleZoneTemp, &vocab::temp_sensor_class},
      {kRoleCoolingSetpoint, &vocab::cool_setpoint_class},
      {kRoleHeatingSetpoint, &vocab::heat_setpoint_class},
      {kRoleOccupancy, &vocab::occupancy_sensor_class},
  };
  std::map<std::string, std::string> out;
  for (const auto& [role, cls] : roles)
    out[role] = series_id_of(g, point_for_role(g, zone, *cls));
  return out;
}

std::pair<HyperParams, ComfortSchedule> derive_settings(
    const Graph& g, const std::string& zone) {
  const std::string node = settings_node(g, zone);

  HyperParams h;
  h.dt_s = numeric_prop(g, node, vocab::control_step, {"s"});
  if (!(h.dt_s > 0.0))
    throw DeriveError("node <" + node + "> control step must be positive");
  h.trigger_threshold =
      numeric_prop(g, node, vocab::trigger_threshold, {"K"});
  h.trigger_window = duration_steps(g, node, vocab::error_horizon, h.dt_s);
  h.training_window =
      duration_steps(g, node, vocab::training_horizon, h.dt_s);
  h.horizon = duration_steps(g, node, vocab::prediction_horizon, h.dt_s);
  h.penalty_upper = numeric_prop(g, node, vocab::penalty_upper, {""});
  h.penalty_lower = numeric_prop(g, node, vocab::penalty_lower, {""});

  ComfortSchedule s;
  s.occupied_min = temperature_prop(g, node, vocab::comfort_min_occ);
  s.occupied_max = temperature_prop(g, node, vocab::comfort_max_occ);
  s.unoccupied_min = temperature_prop(g, node, vocab::comfort_min_unocc);
  s.unoccupied_max = temperature_prop(g, node, vocab::comfort_max_unocc);
  s.occupied_start_s = static_cast<int>(
      3600.0 * numeric_prop(g, node, vocab::occupancy_start, {"h"}));
  s.occupied_end_s = static_cast<int>(
      3600.0 * numeric_prop(g, node, vocab::occupancy_end, {"h"}));

  try {
    h.require_valid();
    s.require_valid();
  } catch (const ValidationError& e) {
    throw DeriveError("node <" + node + "> settings are invalid: " +
                      std::string(e.what()));
  }
  return {h, s};
}

double derive_occupant_gain(const Graph& g, const std::string& zone) {
  return numeric_prop(g, settings_node(g, zone), vocab::occupant_gain,
                      {"W_per_m2"});
}

std::map<std::string, std::string> derive_forecast_files(const Graph& g) {
  const std::pair<const char*, const std::string*> kinds[] = {
      {kForecastWeather, &vocab::weather_forecast_class},
      {kForecastPrice, &vocab::price_forecast_class},
      {kForecastOccupancy, &vocab::occupancy_forecast_class},
  };
  std::map<std::string, std::string> out;
  for (const auto& [kind, cls] : kinds) {
    const std::vector<std::string> hits = instances_of(g, *cls);
    if (hits.empty())
      throw DeriveError("graph declares no forecast of type <" + *cls + ">");
    if (hits.size() > 1)
      throw DeriveError("graph declares several forecasts of type <" + *cls +
                        ">");
    if (!has_type(g, hits[0], vocab::forecast_class))
      throw DeriveError("node <" + hits[0] +
                        "> must also be typed as a plain forecast");
    for (const Triple* t : g.with_predicate(vocab::has_file))
      if (t->s.value == hits[0] && t->o.kind == TermKind::kLiteral)
        out[kind] = t->o.value;
    if (!out.count(kind)) missing(hits[0], vocab::has_file);
  }
  return out;
}

ControllerSetup derive_setup(const Graph& g) {
  ControllerSetup s;
  s.zone_iri = find_zone(g);
  std::tie(s.initial_params, s.bounds) = derive_rc_initial(g, s.zone_iri);
  s.hvac = derive_hvac(g, s.zone_iri);
  s.geom = derive_geometry(g, s.zone_iri);
  std::tie(s.hyper, s.schedule) = derive_settings(g, s.zone_iri);
  s.occupant_gain_w_m2 = derive_occupant_gain(g, s.zone_iri);
  s.sensor_bindings = derive_bindings(g, s.zone_iri);
  s.forecast_files = derive_forecast_files(g);
  return s;
}

Graph to_graph(const ControllerSetup& s) {
  Graph g;
  const std::string base = "urn:derived:";
  const std::string zone = s.zone_iri.empty() ? base + "zone" : s.zone_iri;
  auto iri = [&](const std::string& local) { return Term::iri(base + local); };
  auto add = [&](Term a, const std::string& p, Term b) {
    g.insert(Triple{std::move(a), Term::iri(p), std::move(b)});
  };
  const Term zone_t = Term::iri(zone);

  add(zone_t, vocab::type, Term::iri(vocab::zone_class));
  add(zone_t, vocab::area, Term::number_literal(s.geom.floor_area_m2, "m2"));
  add(zone_t, vocab::volume, Term::number_literal(s.geom.volume_m3, "m3"));

  // One synthetic envelope element of unit area reproduces the aggregated
  // parameters exactly: U = 1/r_w, kappa = c_z minus the air term, g = alpha.
  const double air_term =
      kAirDensity * kAirHeatCapacity * s.geom.volume_m3;
  add(zone_t, vocab::adjacent_element, iri("envelope"));
  add(iri("envelope"), vocab::type, Term::iri(vocab::bot + "Element"));
  add(iri("envelope"), vocab::area, Term::number_literal(1.0, "m2"));
  add(iri("envelope"), vocab::u_value,
      Term::number_literal(1.0 / s.initial_params.r_w, "W_per_m2K"));
  add(iri("envelope"), vocab::areal_heat_capacity,
      Term::number_literal(s.initial_params.c_z - air_term, "J_per_m2K"));
  add(iri("envelope"), vocab::g_value,
      Term::number_literal(s.initial_params.alpha));

  const std::pair<std::string, std::string> devices[kNumDevices] = {
      {"cooling_coil", vocab::cooling_coil_class},
      {"heating_coil", vocab::heating_coil_class},
      {"reheat_coil", vocab::reheat_coil_class},
      {"radiator", vocab::radiator_class},
  };
  add(iri("duct"), vocab::type, Term::iri(vocab::fso + "Duct"));
  add(iri("duct"), vocab::supplies_fluid_to, zone_t);
  for (int j = 0; j < kNumDevices; ++j) {
    const Term dev = iri(devices[j].first);
    add(dev, vocab::type, Term::iri(devices[j].second));
    if (j == kRadiator)
      add(dev, vocab::transfers_heat_to, zone_t);
    else
      add(dev, vocab::supplies_fluid_to, iri("duct"));
    add(dev, vocab::nominal_power,
        Term::number_literal(s.hvac.q_max_w[j], "W"));
    add(dev, vocab::nominal_efficiency,
        Term::number_literal(s.hvac.efficiency[j]));
  }

  const std::pair<const char*, const std::string*> roles[] = {
      {kRoleZoneTemp, &vocab::temp_sensor_class},
      {kRoleCoolingSetpoint, &vocab::cool_setpoint_class},
      {kRoleHeatingSetpoint, &vocab::heat_setpoint_class},
      {kRoleOccupancy, &vocab::occupancy_sensor_class},
  };
  for (const auto& [role, cls] : roles) {
    const auto it = s.sensor_bindings.find(role);
    if (it == s.sensor_bindings.end())
      throw ValidationError(std::string("setup lacks a binding for role ") +
                            role);
    const Term point = iri(std::string("point_") + role);
    add(point, vocab::type, Term::iri(*cls));
    add(point, vocab::is_point_of, zone_t);
    add(point, vocab::has_quantity,
        Term::iri(role == std::string(kRoleOccupancy)
                      ? vocab::quantity_occupancy
                      : vocab::quantity_temperature));
    add(point, vocab::has_series_id, Term::literal(it->second));
  }

  const Term cfg = iri("settings");
  add(cfg, vocab::type, Term::iri(vocab::settings_class));
  add(cfg, vocab::controls_zone, zone_t);
  add(cfg, vocab::control_step, Term::number_literal(s.hyper.dt_s, "s"));
  add(cfg, vocab::trigger_threshold,
      Term::number_literal(s.hyper.trigger_threshold, "K"));
  add(cfg, vocab::error_horizon,
      Term::number_literal(s.hyper.trigger_window * s.hyper.dt_s, "s"));
  add(cfg, vocab::training_horizon,
      Term::number_literal(s.hyper.training_window * s.hyper.dt_s, "s"));
  add(cfg, vocab::prediction_horizon,
      Term::number_literal(s.hyper.horizon * s.hyper.dt_s, "s"));
  add(cfg, vocab::penalty_upper,
      Term::number_literal(s.hyper.penalty_upper));
  add(cfg, vocab::penalty_lower,
      Term::number_literal(s.hyper.penalty_lower));
  add(cfg, vocab::comfort_min_occ,
      Term::number_literal(s.schedule.occupied_min, "K"));
  add(cfg, vocab::comfort_max_occ,
      Term::number_literal(s.schedule.occupied_max, "K"));
  add(cfg, vocab::comfort_min_unocc,
      Term::number_literal(s.schedule.unoccupied_min, "K"));
  add(cfg, vocab::comfort_max_unocc,
      Term::number_literal(s.schedule.unoccupied_max, "K"));
  add(cfg, vocab::occupancy_start,
      Term::number_literal(s.schedule.occupied_start_s / 3600.0, "h"));
  add(cfg, vocab::occupancy_end,
      Term::number_literal(s.schedule.occupied_end_s / 3600.0, "h"));
  add(cfg, vocab::occupant_gain,
      Term::number_literal(s.occupant_gain_w_m2, "W_per_m2"));

  const std::pair<const char*, const std::string*> kinds[] = {
      {kForecastWeather, &vocab::weather_forecast_class},
      {kForecastPrice, &vocab::price_forecast_class},
      {kForecastOccupancy, &vocab::occupancy_forecast_class},
  };
  for (const auto& [kind, cls] : kinds) {
    const auto it = s.forecast_files.find(kind);
    if (it == s.forecast_files.end())
      throw ValidationError(std::string("setup lacks a forecast file for ") +
                            kind);
    const Term f = iri(std::string("forecast_") + kind);
    add(f, vocab::type, Term::iri(vocab::forecast_class));
    add(f, vocab::type, Term::iri(*cls));
    add(f, vocab::has_file, Term::literal(it->second));
  }
  return g;
}

QueryPattern zone_points_query(const std::string& zone_iri) {
  QueryPattern q;
  q.patterns.push_back(TriplePattern{Term::variable("point"),
                                     Term::iri(vocab::is_point_of),
                                     Term::iri(zone_iri)});
  q.patterns.push_back(TriplePattern{Term::variable("point"),
                                     Term::iri(vocab::has_quantity),
                                     Term::variable("quantity")});
  q.patterns.push_back(TriplePattern{Term::variable("point"),
                                     Term::iri(vocab::has_series_id),
                                     Term::variable("id")});
  return q;
}

QueryPattern forecast_files_query() {
  QueryPattern q;
  q.patterns.push_back(TriplePattern{Term::variable("forecast"),
                                     Term::iri(vocab::type),
                                     Term::iri(vocab::forecast_class)});
  q.patterns.push_back(TriplePattern{Term::variable("forecast"),
                                     Term::iri(vocab::has_file),
                                     Term::variable("file")});
  return q;
}

}  // namespace graphmpc
