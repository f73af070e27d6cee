#include "graphmpc/loop.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "graphmpc/derive.hpp"
#include "graphmpc/errors.hpp"
#include "graphmpc/mpc.hpp"
#include "graphmpc/rbc.hpp"
#include "graphmpc/sysid.hpp"
#include "graphmpc/trigger.hpp"

namespace graphmpc {

namespace {

std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& key) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size())
    throw ValidationError("scenario key '" + key + "': not a number: '" + v +
                          "'");
  return x;
}

long to_long(const std::string& v, const std::string& key) {
  const double x = to_double(v, key);
  if (x != std::floor(x))
    throw ValidationError("scenario key '" + key + "': not an integer: '" +
                          v + "'");
  return static_cast<long>(x);
}

bool to_flag(const std::string& v, const std::string& key) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ValidationError("scenario key '" + key + "': expected on/off: '" + v +
                        "'");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Scenario Scenario::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file: " + path);
  const std::filesystem::path dir =
      std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? p : (dir / fp).string();
  };

  Scenario sc;
  sc.start = parse_time_point("2018-07-01");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError(path + ": line " + std::to_string(line_no) +
                            ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ValidationError(path + ": line " + std::to_string(line_no) +
                            ": empty key or value");

    if (key == "graph") sc.graph_path = resolve(val);
    else if (key == "controller") sc.controller = val;
    else if (key == "plant") sc.plant_mode = val;
    else if (key == "start") sc.start = parse_time_point(val);
    else if (key == "days") sc.days = static_cast<int>(to_long(val, key));
    else if (key == "seed") sc.seed = static_cast<std::uint64_t>(to_long(val, key));
    else if (key == "si") sc.si_enabled = to_flag(val, key);
    else if (key == "theta_init") sc.theta_init = val;
    else if (key == "initial_zone_c") sc.initial_zone_c = to_double(val, key);
    else if (key == "noise_sigma") sc.plant.noise_sigma = to_double(val, key);
    else if (key == "weather_csv") sc.weather_csv = resolve(val);
    else if (key == "price_csv") sc.price_csv = resolve(val);
    else if (key == "multistart") sc.multistart = static_cast<int>(to_long(val, key));
    else if (key == "forgetting") sc.forgetting = to_double(val, key);
    else if (key == "occupant_gain") sc.occupant_gain_w_m2 = to_double(val, key);
    else if (key == "plant.r_direct") sc.plant.r_direct = to_double(val, key);
    else if (key == "plant.r_zone_mass") sc.plant.r_zone_mass = to_double(val, key);
    else if (key == "plant.r_mass_amb") sc.plant.r_mass_amb = to_double(val, key);
    else if (key == "plant.c_air") sc.plant.c_air = to_double(val, key);
    else if (key == "plant.c_mass") sc.plant.c_mass = to_double(val, key);
    else if (key == "plant.solar_aperture") sc.plant.solar_aperture_m2 = to_double(val, key);
    else if (key == "plant.solar_air_fraction") sc.plant.solar_air_fraction = to_double(val, key);
    else if (key == "plant.c_z") sc.plant_c_z = to_double(val, key);
    else if (key == "plant.r_w") sc.plant_r_w = to_double(val, key);
    else if (key == "plant.alpha") sc.plant_alpha = to_double(val, key);
    else if (key == "weather.mean_c") sc.weather.mean_c = to_double(val, key);
    else if (key == "weather.daily_amp_c") sc.weather.daily_amp_c = to_double(val, key);
    else if (key == "weather.slow_amp_c") sc.weather.slow_amp_c = to_double(val, key);
    else if (key == "weather.slow_period_h") sc.weather.slow_period_h = to_double(val, key);
    else if (key == "weather.solar_peak") sc.weather.solar_peak_w_m2 = to_double(val, key);
    else if (key == "price.base") sc.price.base = to_double(val, key);
    else if (key == "price.daily_amp") sc.price.daily_amp = to_double(val, key);
    else if (key == "price.ripple_amp") sc.price.ripple_amp = to_double(val, key);
    else
      throw ValidationError(path + ": line " + std::to_string(line_no) +
                            ": unknown scenario key '" + key + "'");
  }
  return sc;
}

void Scenario::require_valid() const {
  if (graph_path.empty())
    throw ValidationError("scenario does not name a graph file");
  if (controller != "mpc" && controller != "rbc")
    throw ValidationError("controller must be 'mpc' or 'rbc'");
  if (plant_mode != "two_node" && plant_mode != "perfect")
    throw ValidationError("plant must be 'two_node' or 'perfect'");
  if (theta_init != "graph" && theta_init != "plant")
    throw ValidationError("theta_init must be 'graph' or 'plant'");
  if (theta_init == "plant" && plant_mode != "perfect")
    throw ValidationError(
        "theta_init = plant is only meaningful for the perfect plant");
  if (days < 1) throw ValidationError("scenario must run at least one day");
  if (initial_zone_c < -30.0 || initial_zone_c > 60.0)
    throw ValidationError("initial zone temperature is implausible");
  if (multistart < 1) throw ValidationError("multistart must be positive");
  if (!(forgetting > 0.0 && forgetting <= 1.0))
    throw ValidationError("forgetting must lie in (0, 1]");
}

std::string Scenario::canonical() const {
  std::string out;
  auto kv = [&](const std::string& k, const std::string& v) {
    out += k + " = " + v + "\n";
  };
  kv("graph", graph_path);
  kv("plant", plant_mode);
  kv("start", format_time_point(start));
  kv("days", std::to_string(days));
  kv("seed", std::to_string(seed));
  kv("si", si_enabled ? "on" : "off");
  kv("theta_init", theta_init);
  kv("initial_zone_c", fmt(initial_zone_c));
  kv("noise_sigma", fmt(plant.noise_sigma));
  kv("weather_csv", weather_csv);
  kv("price_csv", price_csv);
  kv("multistart", std::to_string(multistart));
  kv("forgetting", fmt(forgetting));
  kv("occupant_gain",
     occupant_gain_w_m2 ? fmt(*occupant_gain_w_m2) : "from_graph");
  kv("plant.r_direct", fmt(plant.r_direct));
  kv("plant.r_zone_mass", fmt(plant.r_zone_mass));
  kv("plant.r_mass_amb", fmt(plant.r_mass_amb));
  kv("plant.c_air", fmt(plant.c_air));
  kv("plant.c_mass", fmt(plant.c_mass));
  kv("plant.solar_aperture", fmt(plant.solar_aperture_m2));
  kv("plant.solar_air_fraction", fmt(plant.solar_air_fraction));
  kv("plant.c_z", plant_c_z ? fmt(*plant_c_z) : "from_graph");
  kv("plant.r_w", plant_r_w ? fmt(*plant_r_w) : "from_graph");
  kv("plant.alpha", plant_alpha ? fmt(*plant_alpha) : "from_graph");
  kv("weather.mean_c", fmt(weather.mean_c));
  kv("weather.daily_amp_c", fmt(weather.daily_amp_c));
  kv("weather.slow_amp_c", fmt(weather.slow_amp_c));
  kv("weather.slow_period_h", fmt(weather.slow_period_h));
  kv("weather.solar_peak", fmt(weather.solar_peak_w_m2));
  kv("price.base", fmt(price.base));
  kv("price.daily_amp", fmt(price.daily_amp));
  kv("price.ripple_amp", fmt(price.ripple_amp));
  return out;
}

std::uint64_t Scenario::fingerprint() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (const char c : canonical()) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

struct TraceWriter {
  std::ofstream out;
  bool enabled = false;

  void open(const std::filesystem::path& path) {
    out.open(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    enabled = true;
    out << "step,time,t_true,t_meas,u_cc,u_hc,u_rc,u_rad,fallback,"
           "rmse,triggered,fitted,c_z,r_w,alpha,price,t_amb,h_glo,q_int,"
           "occupied,t_min,t_max,step_cost,step_kwh,violation_k\n";
  }

  void row(long step, TimePoint t, double t_true, double t_meas,
           const ControlVector& u, bool fallback, double rmse, bool trig,
           bool fitted, const RcParams& p, const Disturbance& e,
           const TempBand& band, double cost, double kwh, double viol) {
    if (!enabled) return;
    char buf[640];
    std::snprintf(
        buf, sizeof(buf),
        "%ld,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g,%d,%d,%.17g,"
        "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g,"
        "%.17g\n",
        step, format_time_point(t).c_str(), t_true, t_meas,
        u.u[kCoolingCoil], u.u[kHeatingCoil], u.u[kReheatCoil],
        u.u[kRadiator], fallback ? 1 : 0, rmse, trig ? 1 : 0, fitted ? 1 : 0,
        p.c_z, p.r_w, p.alpha, e.price, e.t_amb, e.h_glo, e.q_int,
        e.occupied ? 1 : 0, band.t_min, band.t_max, cost, kwh, viol);
    out << buf;
  }
};

}  // namespace

LoopMetrics run_closed_loop(const Scenario& sc, const std::string& out_dir) {
  const auto wall_start = std::chrono::steady_clock::now();
  sc.require_valid();

  const Graph g = load_document_file(sc.graph_path);
  const ControllerSetup setup = derive_setup(g);
  const double dt = setup.hyper.dt_s;
  const long steps =
      static_cast<long>(std::llround(sc.days * 86400.0 / dt));
  if (sc.controller == "mpc" && sc.si_enabled &&
      steps <= setup.hyper.training_window)
    throw ValidationError(
        "run too short: identification needs more than " +
        std::to_string(setup.hyper.training_window) + " steps of history");

  SeriesStore store;
  if (!sc.weather_csv.empty()) ingest_weather_csv(&store, sc.weather_csv);
  if (!sc.price_csv.empty()) ingest_price_csv(&store, sc.price_csv);

  OccupancyConfig occ;
  occ.start_s = setup.schedule.occupied_start_s;
  occ.end_s = setup.schedule.occupied_end_s;
  occ.gain_occupied_w_m2 =
      sc.occupant_gain_w_m2.value_or(setup.occupant_gain_w_m2);
  const ForecastService forecast(&store, sc.weather, sc.price, occ);

  PlantConfig plant_cfg = sc.plant;
  plant_cfg.mode = sc.plant_mode == "perfect"
                       ? PlantConfig::Mode::kPerfectFirstOrder
                       : PlantConfig::Mode::kTwoNode;
  plant_cfg.first_order = setup.initial_params;
  if (sc.plant_c_z) plant_cfg.first_order.c_z = *sc.plant_c_z;
  if (sc.plant_r_w) plant_cfg.first_order.r_w = *sc.plant_r_w;
  if (sc.plant_alpha) plant_cfg.first_order.alpha = *sc.plant_alpha;
  plant_cfg.require_valid();

  RcParams theta = sc.theta_init == "plant" ? plant_cfg.first_order
                                            : setup.initial_params;

  const MpcConfig mpc_cfg{setup.hyper.horizon, dt, setup.hyper.penalty_upper,
                          setup.hyper.penalty_lower};
  const TriggerConfig trig_cfg{setup.hyper.trigger_threshold,
                               setup.hyper.trigger_window};
  TriggerState trig(trig_cfg);
  SysIdConfig sid;
  sid.bounds = setup.bounds;
  sid.forgetting = sc.forgetting;
  sid.multistart = sc.multistart;
  sid.seed = sc.seed * 0x9e3779b97f4a7c15ULL + 1;
  const RbcConfig rbc_cfg;

  SeriesStore log_store;
  const std::string zone_series = setup.sensor_bindings.at(kRoleZoneTemp);

  TraceWriter trace;
  std::filesystem::path dir;
  if (!out_dir.empty()) {
    dir = out_dir;
    std::filesystem::create_directories(dir);
    trace.open(dir / "trace.csv");
  }

  PlantState state{sc.initial_zone_c + 273.15, sc.initial_zone_c + 273.15};
  std::mt19937_64 rng(sc.seed);
  std::vector<StepRecord> history;
  history.reserve(steps);

  LoopMetrics m;
  m.controller = sc.controller;
  m.scenario_fingerprint = sc.fingerprint();
  m.start = format_time_point(sc.start);
  m.days = sc.days;
  m.steps = steps;
  m.warmup_steps = std::min<long>(steps, setup.hyper.training_window);

  const bool is_mpc = sc.controller == "mpc";

  for (long k = 0; k < steps; ++k) {
    const TimePoint now =
        sc.start + static_cast<TimePoint>(static_cast<double>(k) * dt);
    const double t_true = state.t_zone;
    const double t_meas = measure_zone_temp(state, plant_cfg, rng);
    log_store.write(zone_series, now, t_meas, "K");
    const Disturbance e = forecast.at(now);

    double rmse = std::nan("");
    bool fired = false;
    bool fitted = false;
    if (is_mpc && k >= 1) {
      const StepRecord& prev = history.back();
      const double predicted =
          step_rc(prev.t_zone, prev.u, prev.e, theta, setup.geom, setup.hvac,
                  dt);
      trig.push(t_meas - predicted);
      if (const auto r = trig.rmse()) {
        rmse = *r;
        fired = evaluate_trigger(*r, trig_cfg);
        if (fired) ++m.trigger_events;
        const bool can_fit =
            sc.si_enabled && k >= setup.hyper.training_window;
        if (can_fit) ++m.eligible_steps;
        if (fired && can_fit) {
          TrainingWindow w;
          w.dt_s = dt;
          const long first = k - setup.hyper.training_window;
          w.records.assign(history.begin() + first, history.end());
          w.records.push_back(StepRecord{t_meas, {}, {}});
          const FitResult fr = fit(w, theta, sid, setup.geom, setup.hvac);
          if (fr.status == FitStatus::kOk) {
            theta = select_params(true, fr.params, theta);
            ++m.fit_calls;
            fitted = true;
            // Residuals in the trigger window are re-expressed under the
            // adopted parameters.
            TrainingWindow recent;
            recent.dt_s = dt;
            recent.records.assign(
                history.begin() + (k - trig_cfg.window), history.end());
            recent.records.push_back(StepRecord{t_meas, {}, {}});
            const std::vector<double> res =
                residuals(recent, theta, setup.geom, setup.hvac);
            trig.rebuild(res);
            rmse = trig.rmse().value_or(rmse);
          } else {
            ++m.fit_rejections;
          }
        }
      }
    }

    ControlVector u;
    bool fallback = false;
    if (is_mpc) {
      const ForecastBundle bundle =
          forecast.bundle(now, setup.hyper.horizon, dt);
      const MpcProblem prob =
          build_problem(t_meas, now, theta, bundle, setup.schedule,
                        setup.hvac, setup.geom, mpc_cfg);
      const MpcSolution sol = solve(prob);
      if (sol.status == MpcStatus::kOptimal) {
        u = receding_action(sol);
      } else {
        u = rbc_step(t_meas, now, setup.schedule, rbc_cfg);
        fallback = true;
        ++m.solver_fallbacks;
      }
    } else {
      u = rbc_step(t_meas, now, setup.schedule, rbc_cfg);
    }

    const TempBand band = comfort_bounds(now, setup.schedule);
    const double viol_k = std::max(0.0, t_true - band.t_max) +
                          std::max(0.0, band.t_min - t_true);
    const double cost = electrical_cost_rate(u, setup.hvac, e.price) *
                        dt / 3600.0;
    double kwh = 0.0;
    for (int j = 0; j < kNumDevices; ++j)
      kwh += std::abs(setup.hvac.delivered_max_w(j)) * u.u[j] * dt / 3.6e6;

    m.energy_cost += cost;
    m.energy_kwh += kwh;
    m.violation_kh += viol_k * dt / 3600.0;
    if (k >= setup.hyper.training_window) {
      m.energy_cost_post_warmup += cost;
      m.violation_kh_post_warmup += viol_k * dt / 3600.0;
    }

    trace.row(k, now, t_true, t_meas, u, fallback, rmse, fired, fitted,
              theta, e, band, cost, kwh, viol_k);

    history.push_back(StepRecord{t_meas, u, e});
    try {
      state = plant_step(state, u, e, plant_cfg, setup.geom, setup.hvac, dt);
    } catch (const SimulationError& ex) {
      throw SimulationError("step " + std::to_string(k) + " (" +
                            format_time_point(now) + "): " + ex.what());
    }
  }

  m.saved_fraction =
      m.eligible_steps > 0
          ? 1.0 - static_cast<double>(m.fit_calls) /
                      static_cast<double>(m.eligible_steps)
          : 0.0;
  m.final_params = theta;
  m.runtime_s = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - wall_start)
                    .count();

  if (!out_dir.empty()) {
    std::ofstream mj(dir / "metrics.json");
    if (!mj) throw ValidationError("cannot write metrics.json");
    mj << metrics_to_json(m) << "\n";
  }
  return m;
}

CompareReport compare(const LoopMetrics& mpc, const LoopMetrics& rbc) {
  if (mpc.controller != "mpc" || rbc.controller != "rbc")
    throw ValidationError("compare expects one mpc and one rbc run");
  if (mpc.scenario_fingerprint != rbc.scenario_fingerprint)
    throw ValidationError(
        "runs are not comparable: scenario fingerprints differ");
  if (!(rbc.energy_cost > 0.0))
    throw ValidationError("baseline run has no positive energy cost");
  CompareReport r;
  r.cost_mpc = mpc.energy_cost;
  r.cost_rbc = rbc.energy_cost;
  r.cost_reduction_fraction =
      (rbc.energy_cost - mpc.energy_cost) / rbc.energy_cost;
  r.violation_mpc_kh = mpc.violation_kh;
  r.violation_rbc_kh = rbc.violation_kh;
  r.trigger_events = mpc.trigger_events;
  r.fit_calls = mpc.fit_calls;
  r.saved_fraction = mpc.saved_fraction;
  return r;
}

std::string CompareReport::text() const {
  char buf[512];
  std::snprintf(
      buf, sizeof(buf),
      "energy cost: mpc %.4f vs rbc %.4f (reduction %.1f%%)\n"
      "comfort violations: mpc %.3f K h vs rbc %.3f K h\n"
      "trigger events: %ld, identifications run: %ld (%.1f%% of eligible "
      "steps skipped)\n",
      cost_mpc, cost_rbc, 100.0 * cost_reduction_fraction, violation_mpc_kh,
      violation_rbc_kh, trigger_events, fit_calls, 100.0 * saved_fraction);
  return buf;
}

std::string metrics_to_json(const LoopMetrics& m) {
  nlohmann::json j;
  j["controller"] = m.controller;
  j["scenario_fingerprint"] = m.scenario_fingerprint;
  j["start"] = m.start;
  j["days"] = m.days;
  j["steps"] = m.steps;
  j["energy_cost"] = m.energy_cost;
  j["energy_kwh"] = m.energy_kwh;
  j["violation_kh"] = m.violation_kh;
  j["energy_cost_post_warmup"] = m.energy_cost_post_warmup;
  j["violation_kh_post_warmup"] = m.violation_kh_post_warmup;
  j["warmup_steps"] = m.warmup_steps;
  j["trigger_events"] = m.trigger_events;
  j["fit_calls"] = m.fit_calls;
  j["fit_rejections"] = m.fit_rejections;
  j["eligible_steps"] = m.eligible_steps;
  j["saved_fraction"] = m.saved_fraction;
  j["solver_fallbacks"] = m.solver_fallbacks;
  j["final_params"] = {{"c_z", m.final_params.c_z},
                       {"r_w", m.final_params.r_w},
                       {"alpha", m.final_params.alpha}};
  j["runtime_s"] = m.runtime_s;
  return j.dump(2);
}

LoopMetrics metrics_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed metrics json: ") + e.what());
  }
  try {
    LoopMetrics m;
    m.controller = j.at("controller").get<std::string>();
    m.scenario_fingerprint =
        j.at("scenario_fingerprint").get<std::uint64_t>();
    m.start = j.at("start").get<std::string>();
    m.days = j.at("days").get<int>();
    m.steps = j.at("steps").get<long>();
    m.energy_cost = j.at("energy_cost").get<double>();
    m.energy_kwh = j.at("energy_kwh").get<double>();
    m.violation_kh = j.at("violation_kh").get<double>();
    m.energy_cost_post_warmup =
        j.at("energy_cost_post_warmup").get<double>();
    m.violation_kh_post_warmup =
        j.at("violation_kh_post_warmup").get<double>();
    m.warmup_steps = j.at("warmup_steps").get<long>();
    m.trigger_events = j.at("trigger_events").get<long>();
    m.fit_calls = j.at("fit_calls").get<long>();
    m.fit_rejections = j.at("fit_rejections").get<long>();
    m.eligible_steps = j.at("eligible_steps").get<long>();
    m.saved_fraction = j.at("saved_fraction").get<double>();
    m.solver_fallbacks = j.at("solver_fallbacks").get<long>();
    m.final_params.c_z = j.at("final_params").at("c_z").get<double>();
    m.final_params.r_w = j.at("final_params").at("r_w").get<double>();
    m.final_params.alpha = j.at("final_params").at("alpha").get<double>();
    m.runtime_s = j.at("runtime_s").get<double>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("metrics json missing fields: ") +
                          e.what());
  }
}

LoopMetrics metrics_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open metrics file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return metrics_from_json(ss.str());
}

}  // namespace graphmpc
