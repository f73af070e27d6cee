#pragma once

// Dense linear programming for the controller: minimize c'x subject to
// A x <= b and box bounds on x, solved by a bounded-variable two-phase
// primal simplex. Solutions carry row duals and an independently computed
// KKT residual so callers can certify optimality.

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace graphmpc {

struct LpProblem {
  Eigen::VectorXd cost;   // n
  Eigen::MatrixXd rows;   // m x n, rows * x <= rhs
  Eigen::VectorXd rhs;    // m
  Eigen::VectorXd lower;  // n, finite
  Eigen::VectorXd upper;  // n, may be +infinity

  int num_vars() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(rhs.size()); }
  void require_valid() const;
};

enum class LpStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
};

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  Eigen::VectorXd x;
  Eigen::VectorXd row_duals;  // multipliers of rows * x <= rhs, nonnegative
  double objective = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
};

struct LpOptions {
  int max_iterations = 20000;
  // Pivots between basis refactorizations.
  int refactor_interval = 100;
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
};

LpSolution solve_lp(const LpProblem& p, const LpOptions& opt = {});

// Worst violation over primal feasibility, dual sign, stationarity of the
// Lagrangian, and complementary slackness. Independent of the solver path.
double lp_kkt_residual(const LpProblem& p, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& row_duals);

// Serializes the problem in the plain-text LP format (Minimize / Subject To
// / Bounds / End) understood by common solvers.
std::string write_lp_format(const LpProblem& p,
                            const std::vector<std::string>& var_names,
                            const std::vector<std::string>& row_names);

}  // namespace graphmpc
