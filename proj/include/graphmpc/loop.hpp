#pragma once

// Closed-loop experiment harness: drives the reference plant with either
// controller, runs the event-triggered identification pipeline, accounts
// energy cost and comfort violations, and serializes traces and metrics.

#include <cstdint>
#include <optional>
#include <string>

#include "graphmpc/forecast.hpp"
#include "graphmpc/plant.hpp"
#include "graphmpc/thermal.hpp"

namespace graphmpc {

struct Scenario {
  std::string graph_path;
  std::string controller = "mpc";      // "mpc" or "rbc"
  std::string plant_mode = "two_node"; // "two_node" or "perfect"
  TimePoint start = 0;
  int days = 31;
  std::uint64_t seed = 1;
  bool si_enabled = true;
  // "graph": warm start from the derived envelope estimate. "plant": start
  // at the plant's true parameters (perfect mode only).
  std::string theta_init = "graph";
  double initial_zone_c = 23.0;
  std::string weather_csv;  // empty: synthetic weather
  std::string price_csv;    // empty: synthetic price
  int multistart = 3;
  double forgetting = 1.0;

  PlantConfig plant;  // mode and first_order are filled in at run time
  std::optional<double> plant_c_z, plant_r_w, plant_alpha;
  SyntheticWeather weather;
  SyntheticPrice price;
  std::optional<double> occupant_gain_w_m2;

  // Parses a key = value file ('#' comments). Relative paths inside the
  // file resolve against the file's directory.
  static Scenario from_file(const std::string& path);
  void require_valid() const;

  // Canonical key = value rendering of everything that defines the
  // experiment except the controller choice, and its FNV-1a hash. Two runs
  // are comparable only when their fingerprints agree.
  std::string canonical() const;
  std::uint64_t fingerprint() const;
};

struct LoopMetrics {
  std::string controller;
  std::uint64_t scenario_fingerprint = 0;
  std::string start;
  int days = 0;
  long steps = 0;

  double energy_cost = 0.0;       // [currency], whole run
  double energy_kwh = 0.0;
  double violation_kh = 0.0;      // [K h] on the true zone temperature
  // Same totals restricted to steps after the identification warmup.
  double energy_cost_post_warmup = 0.0;
  double violation_kh_post_warmup = 0.0;
  long warmup_steps = 0;

  long trigger_events = 0;   // steps whose window RMSE exceeded the threshold
  long fit_calls = 0;        // identifications actually run and adopted
  long fit_rejections = 0;   // fits skipped for insufficient excitation
  long eligible_steps = 0;   // steps on which identification was allowed
  double saved_fraction = 0.0;  // 1 - fit_calls / eligible_steps
  long solver_fallbacks = 0;

  RcParams final_params;
  double runtime_s = 0.0;
};

// Runs the scenario. When out_dir is nonempty, writes trace.csv and
// metrics.json there (creating directories). The controller field of the
// scenario may be overridden by the caller beforehand.
LoopMetrics run_closed_loop(const Scenario& sc, const std::string& out_dir);

struct CompareReport {
  double cost_mpc = 0.0;
  double cost_rbc = 0.0;
  double cost_reduction_fraction = 0.0;  // (rbc - mpc) / rbc
  double violation_mpc_kh = 0.0;
  double violation_rbc_kh = 0.0;
  long trigger_events = 0;
  long fit_calls = 0;
  double saved_fraction = 0.0;

  std::string text() const;
};

// Requires matching scenario fingerprints and the expected controller pair.
CompareReport compare(const LoopMetrics& mpc, const LoopMetrics& rbc);

std::string metrics_to_json(const LoopMetrics& m);
LoopMetrics metrics_from_json(const std::string& text);
LoopMetrics metrics_from_json_file(const std::string& path);

}  // namespace graphmpc
