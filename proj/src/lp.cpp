#include "graphmpc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "graphmpc/errors.hpp"

namespace graphmpc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-10;

enum class VarState : unsigned char { kBasic, kAtLower, kAtUpper };

// Columns are laid out [structural | slack | artificial]. Slack i turns row
// i into an equation; artificials patch rows whose slack starts negative.
struct Tableau {
  int m = 0;
  int n_struct = 0;
  int n_total = 0;
  Eigen::MatrixXd cols;  // m x n_total
  Eigen::VectorXd rhs;   // m
  Eigen::VectorXd lo, hi, x, cost;
  std::vector<VarState> state;
  std::vector<int> basis;  // column basic in each row
  Eigen::MatrixXd binv;
  int pivots_since_refactor = 0;
};

void refactor(Tableau& t) {
  if (t.m == 0) return;
  Eigen::MatrixXd b(t.m, t.m);
  for (int i = 0; i < t.m; ++i) b.col(i) = t.cols.col(t.basis[i]);
  t.binv = b.partialPivLu().inverse();
  Eigen::VectorXd r = t.rhs;
  for (int j = 0; j < t.n_total; ++j)
    if (t.state[j] != VarState::kBasic && t.x[j] != 0.0)
      r -= t.cols.col(j) * t.x[j];
  const Eigen::VectorXd xb = t.binv * r;
  for (int i = 0; i < t.m; ++i) t.x[t.basis[i]] = xb[i];
  t.pivots_since_refactor = 0;
}

void apply_eta(Tableau& t, const Eigen::VectorXd& w, int row) {
  const double piv = w[row];
  t.binv.row(row) /= piv;
  for (int i = 0; i < t.m; ++i) {
    if (i == row) continue;
    if (w[i] != 0.0) t.binv.row(i) -= w[i] * t.binv.row(row);
  }
}

struct PriceResult {
  int col = -1;
  int dir = 0;  // +1 away from lower, -1 away from upper
};

PriceResult price(const Tableau& t, const Eigen::VectorXd& y, double tol,
                  bool bland) {
  PriceResult best;
  double best_score = tol;
  for (int j = 0; j < t.n_total; ++j) {
    if (t.state[j] == VarState::kBasic) continue;
    if (t.lo[j] == t.hi[j]) continue;  // fixed or locked
    const double d = t.cost[j] - y.dot(t.cols.col(j));
    double score = 0.0;
    int dir = 0;
    if (t.state[j] == VarState::kAtLower && d < -tol) {
      score = -d;
      dir = 1;
    } else if (t.state[j] == VarState::kAtUpper && d > tol) {
      score = d;
      dir = -1;
    } else {
      continue;
    }
    if (bland) return PriceResult{j, dir};
    if (score > best_score) {
      best_score = score;
      best = PriceResult{j, dir};
    }
  }
  return best;
}

LpStatus run_simplex(Tableau& t, const LpOptions& opt, int* iters) {
  int degenerate_streak = 0;
  bool bland = false;
  while (true) {
    if (*iters >= opt.max_iterations) return LpStatus::kIterationLimit;
    if (t.pivots_since_refactor >= opt.refactor_interval) refactor(t);

    Eigen::VectorXd y(t.m);
    if (t.m > 0) {
      Eigen::VectorXd cb(t.m);
      for (int i = 0; i < t.m; ++i) cb[i] = t.cost[t.basis[i]];
      y = t.binv.transpose() * cb;
    }

    const PriceResult enter = price(t, y, opt.optimality_tol, bland);
    if (enter.col < 0) return LpStatus::kOptimal;
    ++*iters;

    const Eigen::VectorXd w =
        t.m > 0 ? Eigen::VectorXd(t.binv * t.cols.col(enter.col))
                : Eigen::VectorXd(0);

    // Ratio test: entering variable moves by dir * step; basic variable in
    // row i changes at rate -dir * w[i]. Near-ties are broken towards the
    // largest pivot magnitude.
    constexpr double kTieTol = 1e-10;
    double step = t.hi[enter.col] - t.lo[enter.col];  // bound-flip distance
    int leave_row = -1;
    double leave_pivot = 0.0;
    for (int i = 0; i < t.m; ++i) {
      const double rate = -enter.dir * w[i];
      const int bj = t.basis[i];
      double limit = kInf;
      if (rate < -kPivotTol)
        limit = (t.x[bj] - t.lo[bj]) / -rate;
      else if (rate > kPivotTol && std::isfinite(t.hi[bj]))
        limit = (t.hi[bj] - t.x[bj]) / rate;
      else
        continue;
      if (limit > step + kTieTol) continue;
      if (limit < step - kTieTol || std::abs(w[i]) > std::abs(leave_pivot)) {
        step = std::min(step, std::max(limit, 0.0));
        leave_row = i;
        leave_pivot = w[i];
      }
    }
    if (!std::isfinite(step)) return LpStatus::kUnbounded;

    degenerate_streak = step < 1e-11 ? degenerate_streak + 1 : 0;
    if (degenerate_streak > 2 * (t.m + t.n_total) + 20) bland = true;

    // Move the entering variable and every basic variable.
    t.x[enter.col] += enter.dir * step;
    for (int i = 0; i < t.m; ++i) t.x[t.basis[i]] -= enter.dir * step * w[i];

    if (leave_row < 0) {
      // Bound flip, basis unchanged.
      t.x[enter.col] =
          enter.dir > 0 ? t.hi[enter.col] : t.lo[enter.col];  // exact
      t.state[enter.col] = enter.dir > 0 ? VarState::kAtUpper
                                         : VarState::kAtLower;
      continue;
    }

    const int out = t.basis[leave_row];
    const double rate = -enter.dir * w[leave_row];
    t.x[out] = rate < 0.0 ? t.lo[out] : t.hi[out];  // snap to the bound hit
    t.state[out] = rate < 0.0 ? VarState::kAtLower : VarState::kAtUpper;
    t.state[enter.col] = VarState::kBasic;
    t.basis[leave_row] = enter.col;
    apply_eta(t, w, leave_row);
    ++t.pivots_since_refactor;
  }
}

// Degenerate pivot driving a basic artificial out of the basis; returns
// false when the row admits no pivot (redundant row).
bool evict_artificial(Tableau& t, int row, int art_begin) {
  for (int j = 0; j < art_begin; ++j) {
    if (t.state[j] == VarState::kBasic) continue;
    const Eigen::VectorXd w = t.binv * t.cols.col(j);
    if (std::abs(w[row]) < 1e-7) continue;
    const int out = t.basis[row];
    t.state[out] = VarState::kAtLower;
    t.x[out] = 0.0;
    t.state[j] = VarState::kBasic;  // keeps its current bound value
    t.basis[row] = j;
    apply_eta(t, w, row);
    ++t.pivots_since_refactor;
    return true;
  }
  return false;
}

}  // namespace

void LpProblem::require_valid() const {
  const int n = num_vars();
  const int m = num_rows();
  if (rows.rows() != m || rows.cols() != n || lower.size() != n ||
      upper.size() != n)
    throw ValidationError("LP dimensions are inconsistent");
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(lower[j]))
      throw ValidationError("LP lower bounds must be finite");
    if (lower[j] > upper[j])
      throw ValidationError("LP bounds are inverted");
  }
  if (!cost.allFinite() || !rhs.allFinite() ||
      (m > 0 && !rows.allFinite()))
    throw ValidationError("LP data must be finite");
}

LpSolution solve_lp(const LpProblem& p, const LpOptions& opt) {
  p.require_valid();
  const int n = p.num_vars();
  const int m = p.num_rows();

  Tableau t;
  t.m = m;
  t.n_struct = n;
  t.n_total = n + m;  // artificials appended below as needed
  t.cols = Eigen::MatrixXd::Zero(m, n + 2 * m);
  if (m > 0) t.cols.leftCols(n) = p.rows;
  t.rhs = p.rhs;
  t.lo = Eigen::VectorXd::Zero(n + 2 * m);
  t.hi = Eigen::VectorXd::Zero(n + 2 * m);
  t.x = Eigen::VectorXd::Zero(n + 2 * m);
  t.cost = Eigen::VectorXd::Zero(n + 2 * m);
  t.state.assign(n + 2 * m, VarState::kAtLower);
  t.lo.head(n) = p.lower;
  t.hi.head(n) = p.upper;
  t.lo.segment(n, m).setZero();
  t.hi.segment(n, m).setConstant(kInf);
  t.basis.resize(m);
  t.binv = Eigen::MatrixXd::Identity(m, m);

  // Nonbasic structural variables start at their lower bound.
  for (int j = 0; j < n; ++j) t.x[j] = p.lower[j];

  // Slacks start basic; rows they cannot cover get an artificial.
  int n_art = 0;
  for (int i = 0; i < m; ++i) {
    t.cols(i, n + i) = 1.0;
    const double slack = p.rhs[i] - p.rows.row(i).dot(t.x.head(n));
    if (slack >= 0.0) {
      t.basis[i] = n + i;
      t.state[n + i] = VarState::kBasic;
      t.x[n + i] = slack;
    } else {
      const int art = n + m + n_art++;
      t.cols(i, art) = -1.0;
      t.lo[art] = 0.0;
      t.hi[art] = kInf;
      t.x[art] = -slack;
      t.state[art] = VarState::kBasic;
      t.basis[i] = art;
      t.x[n + i] = 0.0;
    }
  }
  t.n_total = n + m + n_art;
  t.cols.conservativeResize(Eigen::NoChange, t.n_total);
  t.lo.conservativeResize(t.n_total);
  t.hi.conservativeResize(t.n_total);
  t.x.conservativeResize(t.n_total);
  t.cost.conservativeResize(t.n_total);
  t.state.resize(t.n_total);

  LpSolution sol;
  sol.iterations = 0;

  // The starting basis mixes +1 slack and -1 artificial columns; build its
  // true inverse rather than assuming the identity.
  refactor(t);

  if (n_art > 0) {
    t.cost.setZero();
    for (int j = n + m; j < t.n_total; ++j) t.cost[j] = 1.0;
    const LpStatus phase1 = run_simplex(t, opt, &sol.iterations);
    if (phase1 == LpStatus::kIterationLimit) {
      sol.status = phase1;
      return sol;
    }
    double infeas = 0.0;
    for (int j = n + m; j < t.n_total; ++j) infeas += t.x[j];
    const double scale = 1.0 + p.rhs.cwiseAbs().maxCoeff();
    if (infeas > 10.0 * opt.feasibility_tol * scale) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    for (int i = 0; i < m; ++i)
      if (t.basis[i] >= n + m) evict_artificial(t, i, n + m);
    for (int j = n + m; j < t.n_total; ++j) {
      t.lo[j] = t.hi[j] = 0.0;
      if (t.state[j] != VarState::kBasic) t.x[j] = 0.0;
    }
    refactor(t);
  }

  t.cost.setZero();
  t.cost.head(n) = p.cost;
  const LpStatus phase2 = run_simplex(t, opt, &sol.iterations);
  sol.status = phase2;
  if (phase2 != LpStatus::kOptimal) return sol;

  refactor(t);  // tighten the solution before reporting
  sol.x = t.x.head(n);
  sol.objective = p.cost.dot(sol.x);
  sol.row_duals = Eigen::VectorXd::Zero(m);
  if (m > 0) {
    Eigen::VectorXd cb(m);
    for (int i = 0; i < m; ++i) cb[i] = t.cost[t.basis[i]];
    const Eigen::VectorXd y = t.binv.transpose() * cb;
    for (int i = 0; i < m; ++i) sol.row_duals[i] = std::max(0.0, -y[i]);
  }
  sol.kkt_residual = lp_kkt_residual(p, sol.x, sol.row_duals);
  return sol;
}

double lp_kkt_residual(const LpProblem& p, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& row_duals) {
  p.require_valid();
  const int n = p.num_vars();
  const int m = p.num_rows();
  if (x.size() != n || row_duals.size() != m)
    throw ValidationError("KKT check got mismatched vector sizes");
  constexpr double kActiveTol = 1e-6;
  double viol = 0.0;

  Eigen::VectorXd slack(m);
  if (m > 0) slack = p.rhs - p.rows * x;
  for (int i = 0; i < m; ++i) {
    viol = std::max(viol, -slack[i]);       // primal row feasibility
    viol = std::max(viol, -row_duals[i]);   // dual sign
    // eps-complementarity: both the dual and the slack being away from zero
    // is the violation, measured by the smaller of the two.
    viol = std::max(viol, std::min(std::max(row_duals[i], 0.0),
                                   std::max(slack[i], 0.0)));
  }

  Eigen::VectorXd g = p.cost;
  if (m > 0) g += p.rows.transpose() * row_duals;
  for (int j = 0; j < n; ++j) {
    viol = std::max(viol, p.lower[j] - x[j]);
    if (std::isfinite(p.upper[j])) viol = std::max(viol, x[j] - p.upper[j]);
    const bool at_lower = x[j] <= p.lower[j] + kActiveTol;
    const bool at_upper =
        std::isfinite(p.upper[j]) && x[j] >= p.upper[j] - kActiveTol;
    if (at_lower && at_upper)
      continue;  // fixed variable, any gradient is fine
    if (at_lower)
      viol = std::max(viol, -g[j]);
    else if (at_upper)
      viol = std::max(viol, g[j]);
    else
      viol = std::max(viol, std::abs(g[j]));
  }
  return viol;
}

std::string write_lp_format(const LpProblem& p,
                            const std::vector<std::string>& var_names,
                            const std::vector<std::string>& row_names) {
  p.require_valid();
  const int n = p.num_vars();
  const int m = p.num_rows();
  auto var = [&](int j) {
    return j < static_cast<int>(var_names.size()) ? var_names[j]
                                                  : "x" + std::to_string(j);
  };
  auto row = [&](int i) {
    return i < static_cast<int>(row_names.size()) ? row_names[i]
                                                  : "r" + std::to_string(i);
  };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  auto terms = [&](const Eigen::VectorXd& coefs) {
    std::string s;
    bool first = true;
    for (int j = 0; j < coefs.size(); ++j) {
      const double c = coefs[j];
      if (c == 0.0) continue;
      if (first) {
        s += (c < 0.0 ? "- " : "");
        first = false;
      } else {
        s += (c < 0.0 ? " - " : " + ");
      }
      s += num(std::abs(c)) + " " + var(j);
    }
    if (first) s = "0 " + var(0);
    return s;
  };

  std::string out = "Minimize\n obj: " + terms(p.cost) + "\nSubject To\n";
  for (int i = 0; i < m; ++i)
    out += " " + row(i) + ": " + terms(p.rows.row(i)) +
           " <= " + num(p.rhs[i]) + "\n";
  out += "Bounds\n";
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(p.upper[j]))
      out += " " + num(p.lower[j]) + " <= " + var(j) + " <= " +
             num(p.upper[j]) + "\n";
    else
      out += " " + var(j) + " >= " + num(p.lower[j]) + "\n";
  }
  out += "End\n";
  return out;
}

}  // namespace graphmpc
