#include "graphmpc/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "graphmpc/errors.hpp"

namespace graphmpc {

namespace {

constexpr double kJoulePerKwh = 3.6e6;
constexpr double kPenaltyDominanceFactor = 10.0;
constexpr double kCertifyTol = 1e-6;

int var_index(int stage, int k) { return stage * 6 + k; }
int slack_lower_index(int stage) { return stage * 6 + 4; }
int slack_upper_index(int stage) { return stage * 6 + 5; }

// Billed energy cost of running device k at full command for one step.
double stage_energy_coef(const MpcProblem& p, int stage, int k) {
  return p.forecast[stage].price * std::abs(p.hvac.delivered_max_w(k)) *
         p.cfg.dt_s / kJoulePerKwh;
}

}  // namespace

void MpcConfig::require_valid() const {
  if (horizon < 1) throw ValidationError("controller horizon must be positive");
  if (!(dt_s > 0.0)) throw ValidationError("control step must be positive");
  if (!(penalty_upper > 0.0 && penalty_lower > 0.0))
    throw ValidationError("comfort penalties must be positive");
}

MpcProblem build_problem(double t_zone, TimePoint now, const RcParams& params,
                         const ForecastBundle& forecast,
                         const ComfortSchedule& sched, const HvacConfig& hvac,
                         const ZoneGeometry& geom, const MpcConfig& cfg) {
  cfg.require_valid();
  params.require_valid();
  hvac.require_valid();
  geom.require_valid();
  sched.require_valid();
  if (!std::isfinite(t_zone))
    throw ValidationError("measured zone temperature is non-finite");
  if (static_cast<int>(forecast.size()) < cfg.horizon)
    throw ValidationError("forecast bundle shorter than the horizon");

  MpcProblem p;
  p.t_initial = t_zone;
  p.params = params;
  p.forecast.assign(forecast.begin(), forecast.begin() + cfg.horizon);
  p.hvac = hvac;
  p.geom = geom;
  p.cfg = cfg;
  p.bands.reserve(cfg.horizon);
  for (int j = 0; j < cfg.horizon; ++j) {
    p.bands.push_back(comfort_bounds(
        now + static_cast<TimePoint>((j + 1) * cfg.dt_s), sched));
  }

  double worst_energy_coef = 0.0;
  for (int j = 0; j < cfg.horizon; ++j) {
    if (!(p.forecast[j].price >= 0.0))
      throw ValidationError("forecast prices must be nonnegative");
    double coef = 0.0;
    for (int k = 0; k < kNumDevices; ++k) coef += stage_energy_coef(p, j, k);
    worst_energy_coef = std::max(worst_energy_coef, coef);
  }
  if (std::min(cfg.penalty_lower, cfg.penalty_upper) <
      kPenaltyDominanceFactor * worst_energy_coef)
    throw ValidationError("comfort penalties do not dominate the energy cost");
  return p;
}

StageDynamics stage_dynamics(const MpcProblem& p, int stage) {
  const double a = rc_decay(p.params, p.cfg.dt_s);
  const Disturbance& e = p.forecast.at(stage);
  StageDynamics d;
  d.decay = a;
  for (int k = 0; k < kNumDevices; ++k)
    d.gain[k] = (1.0 - a) * p.params.r_w * p.hvac.delivered_max_w(k);
  d.drive = (1.0 - a) *
            (e.t_amb + p.params.r_w * (e.q_int * p.geom.floor_area_m2 +
                                       p.params.alpha * e.h_glo));
  return d;
}

LpProblem assemble_lp(const MpcProblem& p) {
  const int n_stages = p.cfg.horizon;
  const int n = 6 * n_stages;
  const int m = 2 * n_stages;
  const double a = rc_decay(p.params, p.cfg.dt_s);

  LpProblem lp;
  lp.cost = Eigen::VectorXd::Zero(n);
  lp.rows = Eigen::MatrixXd::Zero(m, n);
  lp.rhs = Eigen::VectorXd::Zero(m);
  lp.lower = Eigen::VectorXd::Zero(n);
  lp.upper = Eigen::VectorXd::Zero(n);

  for (int j = 0; j < n_stages; ++j) {
    for (int k = 0; k < kNumDevices; ++k) {
      lp.cost[var_index(j, k)] = stage_energy_coef(p, j, k);
      lp.upper[var_index(j, k)] = 1.0;
    }
    lp.cost[slack_lower_index(j)] = p.cfg.penalty_lower;
    lp.cost[slack_upper_index(j)] = p.cfg.penalty_upper;
    lp.upper[slack_lower_index(j)] =
        std::numeric_limits<double>::infinity();
    lp.upper[slack_upper_index(j)] =
        std::numeric_limits<double>::infinity();
  }

  // Forward substitution: the predicted temperature after stage j is
  //   a^(j+1) T0 + sum_i a^(j-i) (drive_i + gain.u_i),   i = 0..j.
  std::vector<StageDynamics> dyn;
  dyn.reserve(n_stages);
  for (int j = 0; j < n_stages; ++j) dyn.push_back(stage_dynamics(p, j));

  double free_response = p.t_initial;  // a^(j+1) T0 + accumulated drives
  for (int j = 0; j < n_stages; ++j) {
    free_response = a * free_response + dyn[j].drive;
    const int row_hi = 2 * j;
    const int row_lo = 2 * j + 1;
    double weight = 1.0;  // a^(j-i), built backwards from i = j
    for (int i = j; i >= 0; --i) {
      for (int k = 0; k < kNumDevices; ++k) {
        const double c = weight * dyn[i].gain[k];
        lp.rows(row_hi, var_index(i, k)) = c;
        lp.rows(row_lo, var_index(i, k)) = -c;
      }
      weight *= a;
    }
    lp.rows(row_hi, slack_upper_index(j)) = -1.0;
    lp.rows(row_lo, slack_lower_index(j)) = -1.0;
    lp.rhs[row_hi] = p.bands[j].t_max - free_response;
    lp.rhs[row_lo] = free_response - p.bands[j].t_min;
  }
  return lp;
}

MpcSolution solve(const MpcProblem& p, const LpOptions& opt) {
  const int n_stages = p.cfg.horizon;
  const LpProblem full = assemble_lp(p);

  // Interval analysis over the admissible command box: rows that can never
  // bind are dropped before the solve.
  const double a = rc_decay(p.params, p.cfg.dt_s);
  std::vector<char> keep(full.num_rows(), 1);
  {
    double reach_lo = p.t_initial;
    double reach_hi = p.t_initial;
    for (int j = 0; j < n_stages; ++j) {
      const StageDynamics d = stage_dynamics(p, j);
      double gain_lo = 0.0, gain_hi = 0.0;
      for (int k = 0; k < kNumDevices; ++k) {
        gain_lo += std::min(0.0, d.gain[k]);
        gain_hi += std::max(0.0, d.gain[k]);
      }
      reach_lo = a * reach_lo + d.drive + gain_lo;
      reach_hi = a * reach_hi + d.drive + gain_hi;
      if (reach_hi <= p.bands[j].t_max) keep[2 * j] = 0;
      if (reach_lo >= p.bands[j].t_min) keep[2 * j + 1] = 0;
    }
  }

  int m_kept = 0;
  for (char k : keep) m_kept += k;
  LpProblem reduced = full;
  std::vector<int> kept_rows;
  kept_rows.reserve(m_kept);
  reduced.rows = Eigen::MatrixXd::Zero(m_kept, full.num_vars());
  reduced.rhs = Eigen::VectorXd::Zero(m_kept);
  for (int i = 0; i < full.num_rows(); ++i) {
    if (!keep[i]) continue;
    reduced.rows.row(static_cast<int>(kept_rows.size())) = full.rows.row(i);
    reduced.rhs[static_cast<int>(kept_rows.size())] = full.rhs[i];
    kept_rows.push_back(i);
  }

  const LpSolution lp = solve_lp(reduced, opt);

  MpcSolution out;
  out.lp_iterations = lp.iterations;
  if (lp.status != LpStatus::kOptimal) {
    out.status = MpcStatus::kSolverFailure;
    out.diagnostics = lp.status == LpStatus::kInfeasible  ? "lp infeasible"
                      : lp.status == LpStatus::kUnbounded ? "lp unbounded"
                                                          : "iteration limit";
    return out;
  }

  Eigen::VectorXd full_duals = Eigen::VectorXd::Zero(full.num_rows());
  for (std::size_t i = 0; i < kept_rows.size(); ++i)
    full_duals[kept_rows[i]] = lp.row_duals[static_cast<int>(i)];

  out.objective = lp.objective;
  out.kkt_residual = lp_kkt_residual(full, lp.x, full_duals);
  out.u.resize(n_stages);
  out.slack_lower.resize(n_stages);
  out.slack_upper.resize(n_stages);
  out.t_predicted.resize(n_stages);
  double t = p.t_initial;
  for (int j = 0; j < n_stages; ++j) {
    const StageDynamics d = stage_dynamics(p, j);
    double forced = 0.0;
    for (int k = 0; k < kNumDevices; ++k) {
      const double v = std::clamp(lp.x[var_index(j, k)], 0.0, 1.0);
      out.u[j].u[k] = v;
      forced += d.gain[k] * v;
    }
    t = d.decay * t + d.drive + forced;
    out.t_predicted[j] = t;
    out.slack_lower[j] = std::max(0.0, lp.x[slack_lower_index(j)]);
    out.slack_upper[j] = std::max(0.0, lp.x[slack_upper_index(j)]);
  }

  if (out.kkt_residual < kCertifyTol) {
    out.status = MpcStatus::kOptimal;
  } else {
    out.status = MpcStatus::kSolverFailure;
    out.diagnostics = "kkt residual " + std::to_string(out.kkt_residual);
  }
  return out;
}

ControlVector receding_action(const MpcSolution& s) {
  if (s.status != MpcStatus::kOptimal || s.u.empty())
    throw ValidationError("no plan available to apply");
  return s.u.front();
}

std::string export_lp(const MpcProblem& p) {
  const LpProblem lp = assemble_lp(p);
  static const char* kDeviceTag[] = {"cc", "hc", "rc", "rad"};
  std::vector<std::string> vars, rows;
  for (int j = 0; j < p.cfg.horizon; ++j) {
    for (int k = 0; k < kNumDevices; ++k)
      vars.push_back(std::string("u_") + kDeviceTag[k] + "_" +
                     std::to_string(j));
    vars.push_back("s_lo_" + std::to_string(j));
    vars.push_back("s_hi_" + std::to_string(j));
    rows.push_back("hi_" + std::to_string(j));
    rows.push_back("lo_" + std::to_string(j));
  }
  return write_lp_format(lp, vars, rows);
}

}  // namespace graphmpc
