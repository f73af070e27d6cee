// Command-line front end: closed-loop runs, run comparison, configuration
// derivation, and ad-hoc graph queries.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "graphmpc/derive.hpp"
#include "graphmpc/errors.hpp"
#include "graphmpc/graph.hpp"
#include "graphmpc/loop.hpp"

namespace {

using namespace graphmpc;

std::string render_term(const Term& t) {
  switch (t.kind) {
    case TermKind::kVariable:
      return "?" + t.value;
    case TermKind::kLiteral:
      return t.unit.empty() ? t.value : t.value + "^^" + t.unit;
    case TermKind::kIri:
      break;
  }
  std::size_t best_len = 0;
  std::string best;
  for (const auto& [prefix, ns] : builtin_prefixes()) {
    if (t.value.size() > ns.size() && t.value.compare(0, ns.size(), ns) == 0 &&
        ns.size() > best_len) {
      best_len = ns.size();
      best = prefix + ":" + t.value.substr(ns.size());
    }
  }
  return best_len > 0 ? best : "<" + t.value + ">";
}

void print_setup(const ControllerSetup& s) {
  std::printf("zone: %s\n", s.zone_iri.c_str());
  std::printf("geometry: %g m2 floor, %g m3 volume\n", s.geom.floor_area_m2,
              s.geom.volume_m3);
  std::printf("initial parameters: c_z = %.6g J/K, r_w = %.6g K/W, "
              "alpha = %.6g m2\n",
              s.initial_params.c_z, s.initial_params.r_w,
              s.initial_params.alpha);
  std::printf("parameter bounds: c_z in [%.6g, %.6g], r_w in [%.6g, %.6g], "
              "alpha in [%.6g, %.6g]\n",
              s.bounds.lower.c_z, s.bounds.upper.c_z, s.bounds.lower.r_w,
              s.bounds.upper.r_w, s.bounds.lower.alpha, s.bounds.upper.alpha);
  static const char* kNames[kNumDevices] = {"cooling coil", "heating coil",
                                            "reheat coil", "radiator"};
  for (int j = 0; j < kNumDevices; ++j)
    std::printf("device %-12s : nominal %8.5g W, efficiency %.3g, "
                "delivered %9.6g W\n",
                kNames[j], s.hvac.q_max_w[j], s.hvac.efficiency[j],
                s.hvac.delivered_max_w(j));
  std::printf("comfort occupied: [%.2f, %.2f] degC, %02d:%02d-%02d:%02d "
              "weekdays\n",
              s.schedule.occupied_min - 273.15,
              s.schedule.occupied_max - 273.15,
              s.schedule.occupied_start_s / 3600,
              s.schedule.occupied_start_s % 3600 / 60,
              s.schedule.occupied_end_s / 3600,
              s.schedule.occupied_end_s % 3600 / 60);
  std::printf("comfort unoccupied: [%.2f, %.2f] degC\n",
              s.schedule.unoccupied_min - 273.15,
              s.schedule.unoccupied_max - 273.15);
  std::printf("control step: %g s, horizon: %d steps, training window: %d "
              "steps, trigger window: %d steps, trigger threshold: %g K\n",
              s.hyper.dt_s, s.hyper.horizon, s.hyper.training_window,
              s.hyper.trigger_window, s.hyper.trigger_threshold);
  std::printf("comfort slack penalties: %g (upper), %g (lower)\n",
              s.hyper.penalty_upper, s.hyper.penalty_lower);
  std::printf("occupant gain density: %g W/m2\n", s.occupant_gain_w_m2);
  for (const auto& [role, id] : s.sensor_bindings)
    std::printf("sensor binding: %-20s -> %s\n", role.c_str(), id.c_str());
  for (const auto& [kind, file] : s.forecast_files)
    std::printf("forecast file: %-10s -> %s\n", kind.c_str(), file.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"knowledge-graph-configured predictive HVAC control"};
  app.require_subcommand(1);

  std::string scenario_path, controller_override, out_dir;
  auto* run = app.add_subcommand("run", "run a closed-loop scenario");
  run->add_option("--scenario", scenario_path, "scenario file (key = value)")
      ->required();
  run->add_option("--controller", controller_override,
                  "override the scenario's controller")
      ->check(CLI::IsMember({"mpc", "rbc"}));
  run->add_option("--out", out_dir,
                  "directory for trace.csv and metrics.json");
  run->callback([&] {
    Scenario sc = Scenario::from_file(scenario_path);
    if (!controller_override.empty()) sc.controller = controller_override;
    const LoopMetrics m = run_closed_loop(sc, out_dir);
    std::cout << metrics_to_json(m) << "\n";
  });

  std::string mpc_path, rbc_path;
  auto* cmp = app.add_subcommand(
      "compare", "compare an mpc and an rbc metrics.json of the same scenario");
  cmp->add_option("--mpc", mpc_path, "metrics.json of the mpc run")
      ->required();
  cmp->add_option("--rbc", rbc_path, "metrics.json of the rbc run")
      ->required();
  cmp->callback([&] {
    const CompareReport r = compare(metrics_from_json_file(mpc_path),
                                    metrics_from_json_file(rbc_path));
    std::cout << r.text();
  });

  std::string graph_path;
  auto* der = app.add_subcommand(
      "derive", "derive the controller configuration from a building graph");
  der->add_option("--graph", graph_path, "graph document")->required();
  der->callback([&] { print_setup(derive_setup(load_document_file(graph_path))); });

  std::string q_graph, q_file;
  auto* qry = app.add_subcommand("query", "match a pattern query against a graph");
  qry->add_option("--graph", q_graph, "graph document")->required();
  qry->add_option("--query", q_file, "query file")->required();
  qry->callback([&] {
    const Graph g = load_document_file(q_graph);
    const QueryPattern q = parse_query_file(q_file);
    for (const Binding& row : match(g, q)) {
      bool first = true;
      for (const auto& [var, term] : row) {
        if (!first) std::cout << '\t';
        std::cout << var << '=' << render_term(term);
        first = false;
      }
      std::cout << '\n';
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
