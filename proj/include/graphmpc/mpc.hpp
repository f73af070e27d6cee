#pragma once

// Economic predictive controller. The first-order dynamics are eliminated by
// forward substitution, leaving a linear program over the device commands
// and per-step comfort slacks.

#include <string>
#include <vector>

#include "graphmpc/lp.hpp"
#include "graphmpc/thermal.hpp"

namespace graphmpc {

using ForecastBundle = std::vector<Disturbance>;

struct MpcConfig {
  int horizon = 96;          // control steps
  double dt_s = 300.0;
  double penalty_upper = 1000.0;  // [currency per K per step]
  double penalty_lower = 1000.0;

  void require_valid() const;
};

struct MpcProblem {
  double t_initial = 293.15;  // measured zone temperature [K]
  RcParams params;
  ForecastBundle forecast;       // horizon entries
  std::vector<TempBand> bands;   // band at each predicted step
  HvacConfig hvac;
  ZoneGeometry geom;
  MpcConfig cfg;
};

// Coefficients of one predicted step: next = decay * prev + gain.u + drive.
struct StageDynamics {
  double decay = 0.0;
  std::array<double, kNumDevices> gain{};
  double drive = 0.0;
};

// Assembles the problem from a measurement, the current parameter estimate,
// a forecast bundle covering the horizon, and the comfort schedule evaluated
// at each predicted step time. Throws ValidationError when the bundle is
// shorter than the horizon or the slack penalties fail to dominate the
// energy cost.
MpcProblem build_problem(double t_zone, TimePoint now, const RcParams& params,
                         const ForecastBundle& forecast,
                         const ComfortSchedule& sched, const HvacConfig& hvac,
                         const ZoneGeometry& geom, const MpcConfig& cfg);

StageDynamics stage_dynamics(const MpcProblem& p, int stage);

// The full condensed LP, before any presolve. Variable order per stage:
// four device commands, then the lower and upper comfort slacks.
LpProblem assemble_lp(const MpcProblem& p);

enum class MpcStatus { kOptimal, kSolverFailure };

struct MpcSolution {
  MpcStatus status = MpcStatus::kSolverFailure;
  std::vector<ControlVector> u;
  std::vector<double> slack_lower;  // [K]
  std::vector<double> slack_upper;  // [K]
  std::vector<double> t_predicted;  // [K], one per stage
  double objective = 0.0;
  double kkt_residual = 0.0;
  int lp_iterations = 0;
  std::string diagnostics;
};

// Solves the condensed LP. Rows that interval analysis proves can never
// bind for any admissible command sequence are dropped before the solve and
// their slacks restored as zero afterwards; the reported KKT residual is
// evaluated on the full problem.
MpcSolution solve(const MpcProblem& p, const LpOptions& opt = {});

// First command of the plan, the only one applied under receding horizon.
ControlVector receding_action(const MpcSolution& s);

// Plain-text LP serialization of the full problem, with per-stage variable
// and row names.
std::string export_lp(const MpcProblem& p);

}  // namespace graphmpc
