#pragma once

// Grey-box parameter identification from logged operation data: weighted
// nonlinear least squares on one-step-ahead prediction errors, solved by a
// projected Levenberg-Marquardt iteration in log-parameter space.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "graphmpc/thermal.hpp"

namespace graphmpc {

// One logged control step: the measured zone temperature at the step start,
// and the command and disturbance applied over the step.
struct StepRecord {
  double t_zone = 0.0;  // [K]
  ControlVector u;
  Disturbance e;
};

// Time-ordered window of logged steps with uniform spacing. The final
// record's command and disturbance are not consumed by the residuals (only
// its temperature is), so callers may leave them zeroed.
struct TrainingWindow {
  std::vector<StepRecord> records;
  double dt_s = 300.0;

  void require_valid() const;
};

struct SysIdConfig {
  ParamBounds bounds;
  // Weight of the residual ending j steps before the window end is
  // forgetting^j; 1.0 keeps all residuals equally weighted.
  double forgetting = 1.0;
  int max_iterations = 80;
  // Convergence threshold on the infinity norm of the accepted step in
  // log-parameter space (a relative parameter change).
  double step_tolerance = 1e-12;
  int multistart = 3;
  std::uint64_t seed = 0x5eed;
  // Below both variance floors the window is declared unidentifiable.
  double min_temp_variance = 1e-4;  // [K^2]
  double min_power_variance = 1.0;  // [W^2]

  void require_valid() const;
};

// One-step-ahead prediction errors: residual i is the measured temperature
// of record i+1 minus the model's one-step prediction from record i.
std::vector<double> residuals(const TrainingWindow& w, const RcParams& p,
                              const ZoneGeometry& geom, const HvacConfig& cfg);

// Exponentially forgotten weight of residual i out of n (latest has weight 1).
double residual_weight(double forgetting, int i, int n);

// Weighted sum of squared residuals.
double objective(const TrainingWindow& w, const RcParams& p,
                 const SysIdConfig& cfg, const ZoneGeometry& geom,
                 const HvacConfig& hvac);

// Analytic gradient of the objective with respect to (c_z, r_w, alpha).
Eigen::Vector3d objective_gradient(const TrainingWindow& w, const RcParams& p,
                                   const SysIdConfig& cfg,
                                   const ZoneGeometry& geom,
                                   const HvacConfig& hvac);

enum class FitStatus {
  kOk,
  kInsufficientExcitation,
};

struct FitResult {
  FitStatus status = FitStatus::kOk;
  RcParams params;
  double objective = 0.0;  // weighted, at the returned parameters
  double rmse = 0.0;       // unweighted residual RMSE at the returned parameters
  int iterations = 0;      // accepted steps summed over all starts
};

// Fits the grey-box parameters to the window. The warm start is always one
// of the multistart seeds, so the returned objective never exceeds the warm
// start's. Deterministic for a fixed config.
FitResult fit(const TrainingWindow& w, const RcParams& warm_start,
              const SysIdConfig& cfg, const ZoneGeometry& geom,
              const HvacConfig& hvac);

}  // namespace graphmpc
