#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "graphmpc/civil_time.hpp"
#include "graphmpc/errors.hpp"
#include "graphmpc/mpc.hpp"

using namespace graphmpc;
using doctest::Approx;

namespace {

HvacConfig office_hvac() {
  HvacConfig h;
  h.q_max_w = {-1814.0, 1477.0, 261.0, 2787.0};
  h.efficiency = {2.7, 0.8, 0.8, 0.9};
  return h;
}

ZoneGeometry office_geom() { return {48.0, 129.6}; }

RcParams office_params() { return {6600297.6, 1.0 / 58.8, 4.2}; }

Disturbance mild(double price = 0.25) {
  return Disturbance{295.15, 0.0, 0.0, price, false};
}

// Energy cost of running device k at full command over one step.
double energy_coef(const MpcProblem& p, int stage, int k) {
  return p.forecast[stage].price * std::abs(p.hvac.delivered_max_w(k)) *
         p.cfg.dt_s / 3.6e6;
}

double round_slack_up(double s) { return std::ceil(s * 100.0 - 1e-9) / 100.0; }

// Exhaustive search over all device commands on a 0.01 grid for a
// one-stage problem; slacks take the smallest feasible grid value.
double grid_minimum_1stage(const MpcProblem& p) {
  const StageDynamics d = stage_dynamics(p, 0);
  std::array<double, kNumDevices> e{};
  for (int k = 0; k < kNumDevices; ++k) e[k] = energy_coef(p, 0, k);
  const TempBand band = p.bands[0];
  const double base = d.decay * p.t_initial + d.drive;

  double best = std::numeric_limits<double>::infinity();
  for (int i0 = 0; i0 <= 100; ++i0) {
    const double c0 = e[0] * i0 / 100.0;
    const double t0 = base + d.gain[0] * i0 / 100.0;
    for (int i1 = 0; i1 <= 100; ++i1) {
      const double c1 = c0 + e[1] * i1 / 100.0;
      const double t1 = t0 + d.gain[1] * i1 / 100.0;
      for (int i2 = 0; i2 <= 100; ++i2) {
        const double c2 = c1 + e[2] * i2 / 100.0;
        const double t2 = t1 + d.gain[2] * i2 / 100.0;
        for (int i3 = 0; i3 <= 100; ++i3) {
          const double cost = c2 + e[3] * i3 / 100.0;
          const double t = t2 + d.gain[3] * i3 / 100.0;
          const double pen =
              p.cfg.penalty_lower * round_slack_up(std::max(0.0, band.t_min - t)) +
              p.cfg.penalty_upper * round_slack_up(std::max(0.0, t - band.t_max));
          best = std::min(best, cost + pen);
        }
      }
    }
  }
  return best;
}

// Two-stage exhaustive search with two active devices (the others must have
// zero nominal power in the instance).
double grid_minimum_2stage(const MpcProblem& p, int ka, int kb) {
  const StageDynamics d0 = stage_dynamics(p, 0);
  const StageDynamics d1 = stage_dynamics(p, 1);
  const double e0a = energy_coef(p, 0, ka), e0b = energy_coef(p, 0, kb);
  const double e1a = energy_coef(p, 1, ka), e1b = energy_coef(p, 1, kb);

  auto pen = [&](double t, const TempBand& band) {
    return p.cfg.penalty_lower * round_slack_up(std::max(0.0, band.t_min - t)) +
           p.cfg.penalty_upper * round_slack_up(std::max(0.0, t - band.t_max));
  };

  double best = std::numeric_limits<double>::infinity();
  for (int ia = 0; ia <= 100; ++ia) {
    for (int ib = 0; ib <= 100; ++ib) {
      const double t1 = d0.decay * p.t_initial + d0.drive +
                        d0.gain[ka] * ia / 100.0 + d0.gain[kb] * ib / 100.0;
      const double c1 =
          e0a * ia / 100.0 + e0b * ib / 100.0 + pen(t1, p.bands[0]);
      const double t2base = d1.decay * t1 + d1.drive;
      for (int ja = 0; ja <= 100; ++ja) {
        const double t2a = t2base + d1.gain[ka] * ja / 100.0;
        const double c2a = c1 + e1a * ja / 100.0;
        for (int jb = 0; jb <= 100; ++jb) {
          const double t2 = t2a + d1.gain[kb] * jb / 100.0;
          const double cost = c2a + e1b * jb / 100.0 + pen(t2, p.bands[1]);
          best = std::min(best, cost);
        }
      }
    }
  }
  return best;
}

// How much worse the best grid point can be than the continuous optimum:
// each command moves at most half a grid cell, which perturbs both the
// energy bill and (through the temperature path) the slack penalties; the
// grid slacks additionally round up by at most one cell each.
double grid_resolution_bound(const MpcProblem& p) {
  const int n = p.cfg.horizon;
  double gain_sum = 0.0;
  for (int k = 0; k < kNumDevices; ++k)
    gain_sum += std::abs(stage_dynamics(p, 0).gain[k]);
  double bound = 0.0;
  for (int j = 0; j < n; ++j) {
    double ecost = 0.0;
    for (int k = 0; k < kNumDevices; ++k) ecost += energy_coef(p, j, k);
    bound += 0.005 * ecost;
    bound += (p.cfg.penalty_lower + p.cfg.penalty_upper) *
             (0.005 * gain_sum * (j + 1) + 0.01);
  }
  return bound;
}

}  // namespace

TEST_CASE("a one-stage problem has six decision variables and two rows") {
  MpcConfig cfg;
  cfg.horizon = 1;
  const ForecastBundle f(1, mild());
  const MpcProblem p =
      build_problem(295.15, parse_time_point("2018-07-03 10:00"),
                    office_params(), f, ComfortSchedule{}, office_hvac(),
                    office_geom(), cfg);
  const LpProblem lp = assemble_lp(p);
  CHECK(lp.num_vars() == 6);
  CHECK(lp.num_rows() == 2);
}

TEST_CASE("stage dynamics reproduce the model update exactly") {
  MpcConfig cfg;
  cfg.horizon = 4;
  ForecastBundle f;
  f.push_back(Disturbance{303.15, 500.0, 10.0, 0.3, true});
  f.push_back(Disturbance{301.15, 200.0, 0.0, 0.2, false});
  f.push_back(Disturbance{279.15, 0.0, 10.0, 0.4, true});
  f.push_back(Disturbance{295.15, 50.0, 0.0, 0.1, false});
  const MpcProblem p =
      build_problem(296.15, parse_time_point("2018-07-03 10:00"),
                    office_params(), f, ComfortSchedule{}, office_hvac(),
                    office_geom(), cfg);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int j = 0; j < 4; ++j) {
    const StageDynamics d = stage_dynamics(p, j);
    for (int trial = 0; trial < 5; ++trial) {
      const double t = 288.15 + 20.0 * frac(rng);
      const ControlVector u{{frac(rng), frac(rng), frac(rng), frac(rng)}};
      double affine = d.decay * t + d.drive;
      for (int k = 0; k < kNumDevices; ++k) affine += d.gain[k] * u.u[k];
      const double direct = step_rc(t, u, p.forecast[j], p.params,
                                    p.geom, p.hvac, cfg.dt_s);
      CHECK(affine == Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("horizon bands cross the occupancy boundary at the right step") {
  MpcConfig cfg;  // 96 stages of 300 s = 8 h
  const ForecastBundle f(96, mild());
  const TimePoint now = parse_time_point("2018-07-03 16:00");  // Tuesday
  const MpcProblem p =
      build_problem(295.15, now, office_params(), f, ComfortSchedule{},
                    office_hvac(), office_geom(), cfg);
  REQUIRE(p.bands.size() == 96);
  const ComfortSchedule sched;
  for (int j = 0; j < 96; ++j) {
    const TimePoint t = now + static_cast<TimePoint>((j + 1) * 300);
    const TempBand expect = comfort_bounds(t, sched);
    CHECK(p.bands[j].t_min == expect.t_min);
    CHECK(p.bands[j].t_max == expect.t_max);
  }
  // Stage 22 predicts 17:55 (occupied); stage 23 predicts 18:00 (relaxed).
  CHECK(p.bands[22].t_max == Approx(300.15));
  CHECK(p.bands[23].t_max == Approx(305.15));
}

TEST_CASE("problem assembly rejects bad inputs") {
  MpcConfig cfg;
  cfg.horizon = 4;
  const TimePoint now = parse_time_point("2018-07-03 10:00");
  const ForecastBundle short_f(3, mild());
  CHECK_THROWS_AS(
      build_problem(295.15, now, office_params(), short_f, ComfortSchedule{},
                    office_hvac(), office_geom(), cfg),
      ValidationError);

  ForecastBundle priced(4, mild());
  priced[2].price = -0.1;
  CHECK_THROWS_AS(
      build_problem(295.15, now, office_params(), priced, ComfortSchedule{},
                    office_hvac(), office_geom(), cfg),
      ValidationError);

  MpcConfig weak = cfg;
  weak.penalty_lower = 0.1;  // cannot dominate the energy bill
  const ForecastBundle f(4, mild());
  CHECK_THROWS_AS(build_problem(295.15, now, office_params(), f,
                                ComfortSchedule{}, office_hvac(),
                                office_geom(), weak),
                  ValidationError);

  CHECK_THROWS_AS(
      build_problem(std::nan(""), now, office_params(), f, ComfortSchedule{},
                    office_hvac(), office_geom(), cfg),
      ValidationError);
}

TEST_CASE("mid-band state with benign forecast does nothing for free") {
  MpcConfig cfg;
  cfg.horizon = 12;
  const ForecastBundle f(12, mild());
  const MpcProblem p =
      build_problem(297.15, parse_time_point("2018-07-03 10:00"),
                    office_params(), f, ComfortSchedule{}, office_hvac(),
                    office_geom(), cfg);
  const MpcSolution s = solve(p);
  REQUIRE(s.status == MpcStatus::kOptimal);
  CHECK(s.objective == Approx(0.0).scale(1.0));
  for (const ControlVector& u : s.u)
    for (double v : u.u) CHECK(v == Approx(0.0).scale(1.0));
  for (double v : s.slack_lower) CHECK(v == Approx(0.0).scale(1.0));
  for (double v : s.slack_upper) CHECK(v == Approx(0.0).scale(1.0));
  CHECK(s.kkt_residual < 1e-6);
}

TEST_CASE("one-stage heating need is met exactly without slack") {
  MpcConfig cfg;
  cfg.horizon = 1;
  ForecastBundle f(1, Disturbance{278.15, 0.0, 0.0, 0.25, true});
  // Just below the occupied minimum of 294.15 K, near enough that one step
  // of partial heating closes the gap (full heating moves ~0.18 K per step).
  const double t0 = 294.05;
  const MpcProblem p =
      build_problem(t0, parse_time_point("2018-07-03 10:00"), office_params(),
                    f, ComfortSchedule{}, office_hvac(), office_geom(), cfg);
  const MpcSolution s = solve(p);
  REQUIRE(s.status == MpcStatus::kOptimal);
  CHECK(s.t_predicted[0] >= 294.15 - 1e-6);
  CHECK(s.slack_lower[0] == Approx(0.0).scale(1.0));
  CHECK(s.slack_upper[0] == Approx(0.0).scale(1.0));
  // The oracle agrees within the grid's resolution.
  const double grid = grid_minimum_1stage(p);
  CHECK(s.objective <= grid + 1e-9);
  CHECK(s.objective >= grid - grid_resolution_bound(p));
}

TEST_CASE("unavoidable violation binds the slack exactly") {
  // Freezing ambient and feeble heating: even full power cannot reach the
  // occupied band, so the lower slack must take up exactly the shortfall.
  HvacConfig weak = office_hvac();
  weak.q_max_w = {-10.0, 20.0, 5.0, 30.0};
  MpcConfig cfg;
  cfg.horizon = 1;
  ForecastBundle f(1, Disturbance{248.15, 0.0, 0.0, 0.25, true});
  const MpcProblem p =
      build_problem(288.15, parse_time_point("2018-07-03 10:00"),
                    office_params(), f, ComfortSchedule{}, weak,
                    office_geom(), cfg);
  const MpcSolution s = solve(p);
  REQUIRE(s.status == MpcStatus::kOptimal);
  CHECK(s.slack_lower[0] > 0.0);
  // Complementarity: a positive lower slack means the bound binds exactly.
  CHECK(s.t_predicted[0] == Approx(294.15 - s.slack_lower[0]).epsilon(1e-9));
  CHECK(s.slack_upper[0] == Approx(0.0).scale(1.0));
  CHECK(s.kkt_residual < 1e-6);
}

TEST_CASE("random one-stage instances never beat the exhaustive grid") {
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> temp(288.15, 302.15);
  std::uniform_real_distribution<double> amb(273.15, 308.15);
  std::uniform_real_distribution<double> sun(0.0, 800.0);
  std::uniform_real_distribution<double> price(0.05, 0.5);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  std::uniform_real_distribution<double> log_u(std::log(0.3), std::log(3.0));

  const TimePoint days[2] = {parse_time_point("2018-07-03 10:00"),
                             parse_time_point("2018-07-03 22:00")};
  for (int trial = 0; trial < 8; ++trial) {
    MpcConfig cfg;
    cfg.horizon = 1;
    RcParams base = office_params();
    RcParams params{base.c_z * std::exp(log_u(rng)),
                    base.r_w * std::exp(log_u(rng)),
                    base.alpha * std::exp(log_u(rng))};
    ForecastBundle f(1, Disturbance{amb(rng), sun(rng),
                                    frac(rng) < 0.5 ? 10.0 : 0.0, price(rng),
                                    false});
    const MpcProblem p =
        build_problem(temp(rng), days[trial % 2], params, f,
                      ComfortSchedule{}, office_hvac(), office_geom(), cfg);
    const MpcSolution s = solve(p);
    REQUIRE(s.status == MpcStatus::kOptimal);
    CHECK(s.kkt_residual < 1e-6);
    const double grid = grid_minimum_1stage(p);
    CHECK(s.objective <= grid + 1e-9);
    CHECK(s.objective >= grid - grid_resolution_bound(p));
  }
}

TEST_CASE("random two-stage instances never beat the exhaustive grid") {
  std::mt19937_64 rng(92);
  std::uniform_real_distribution<double> temp(288.15, 302.15);
  std::uniform_real_distribution<double> amb(273.15, 308.15);
  std::uniform_real_distribution<double> price(0.05, 0.5);

  for (int trial = 0; trial < 3; ++trial) {
    // Two active devices keep the exhaustive search tractable.
    HvacConfig hvac = office_hvac();
    hvac.q_max_w[kHeatingCoil] = 0.0;
    hvac.q_max_w[kReheatCoil] = 0.0;
    MpcConfig cfg;
    cfg.horizon = 2;
    ForecastBundle f;
    f.push_back(Disturbance{amb(rng), 300.0, 10.0, price(rng), true});
    f.push_back(Disturbance{amb(rng), 0.0, 0.0, price(rng), false});
    const MpcProblem p =
        build_problem(temp(rng), parse_time_point("2018-07-03 17:50"),
                      office_params(), f, ComfortSchedule{}, hvac,
                      office_geom(), cfg);
    const MpcSolution s = solve(p);
    REQUIRE(s.status == MpcStatus::kOptimal);
    const double grid = grid_minimum_2stage(p, kCoolingCoil, kRadiator);
    CHECK(s.objective <= grid + 1e-9);
    CHECK(s.objective >= grid - grid_resolution_bound(p));
  }
}

TEST_CASE("presolve drops rows without changing the optimum") {
  std::mt19937_64 rng(93);
  std::uniform_real_distribution<double> temp(290.15, 300.15);
  std::uniform_real_distribution<double> amb(278.15, 306.15);
  std::uniform_real_distribution<double> sun(0.0, 600.0);
  std::uniform_real_distribution<double> price(0.05, 0.5);

  for (int trial = 0; trial < 6; ++trial) {
    MpcConfig cfg;
    cfg.horizon = 24;
    ForecastBundle f;
    for (int j = 0; j < 24; ++j)
      f.push_back(Disturbance{amb(rng), sun(rng), 10.0, price(rng), true});
    const MpcProblem p =
        build_problem(temp(rng), parse_time_point("2018-07-03 15:00"),
                      office_params(), f, ComfortSchedule{}, office_hvac(),
                      office_geom(), cfg);

    const MpcSolution fast = solve(p);
    REQUIRE(fast.status == MpcStatus::kOptimal);
    const LpSolution full = solve_lp(assemble_lp(p));
    REQUIRE(full.status == LpStatus::kOptimal);
    CHECK(fast.objective == Approx(full.objective).epsilon(1e-9).scale(1.0));
    CHECK(fast.kkt_residual < 1e-6);
  }
}

TEST_CASE("predicted trajectory satisfies the slack-relaxed bounds") {
  MpcConfig cfg;
  cfg.horizon = 48;
  ForecastBundle f;
  for (int j = 0; j < 48; ++j)
    f.push_back(Disturbance{307.15, 700.0, 10.0, 0.3, true});
  const MpcProblem p =
      build_problem(299.15, parse_time_point("2018-07-03 09:00"),
                    office_params(), f, ComfortSchedule{}, office_hvac(),
                    office_geom(), cfg);
  const MpcSolution s = solve(p);
  REQUIRE(s.status == MpcStatus::kOptimal);
  for (int j = 0; j < 48; ++j) {
    CHECK(s.t_predicted[j] <= p.bands[j].t_max + s.slack_upper[j] + 1e-6);
    CHECK(s.t_predicted[j] >= p.bands[j].t_min - s.slack_lower[j] - 1e-6);
    CHECK(s.slack_lower[j] >= 0.0);
    CHECK(s.slack_upper[j] >= 0.0);
    for (double v : s.u[j].u) {
      CHECK(v >= -1e-9);
      CHECK(v <= 1.0 + 1e-9);
    }
  }
  // The trajectory must follow the declared dynamics step by step.
  double t = p.t_initial;
  for (int j = 0; j < 48; ++j) {
    t = step_rc(t, s.u[j], p.forecast[j], p.params, p.geom, p.hvac, cfg.dt_s);
    CHECK(s.t_predicted[j] == Approx(t).epsilon(1e-9));
  }
}

TEST_CASE("scaling prices scales a slack-free objective exactly") {
  MpcConfig cfg;
  cfg.horizon = 12;
  ForecastBundle f;
  for (int j = 0; j < 12; ++j)
    f.push_back(Disturbance{305.15, 400.0, 10.0, 0.2 + 0.01 * j, true});
  const TimePoint now = parse_time_point("2018-07-03 10:00");
  const MpcProblem p =
      build_problem(299.65, now, office_params(), f, ComfortSchedule{},
                    office_hvac(), office_geom(), cfg);
  const MpcSolution s1 = solve(p);
  REQUIRE(s1.status == MpcStatus::kOptimal);
  for (double v : s1.slack_lower) REQUIRE(v == Approx(0.0).scale(1.0));
  for (double v : s1.slack_upper) REQUIRE(v == Approx(0.0).scale(1.0));
  REQUIRE(s1.objective > 0.0);  // cooling is needed

  ForecastBundle doubled = f;
  for (Disturbance& e : doubled) e.price *= 2.0;
  const MpcProblem p2 =
      build_problem(299.65, now, office_params(), doubled, ComfortSchedule{},
                    office_hvac(), office_geom(), cfg);
  const MpcSolution s2 = solve(p2);
  REQUIRE(s2.status == MpcStatus::kOptimal);
  CHECK(s2.objective == Approx(2.0 * s1.objective).epsilon(1e-9));
  // The first solution stays optimal for the scaled problem: evaluating its
  // commands under doubled prices reproduces the scaled optimum.
  double replay = 0.0;
  for (int j = 0; j < 12; ++j)
    for (int k = 0; k < kNumDevices; ++k)
      replay += energy_coef(p2, j, k) * s1.u[j].u[k];
  CHECK(replay == Approx(s2.objective).epsilon(1e-9));
}

TEST_CASE("growing penalties drive avoidable slacks to zero") {
  // Feasible without slack, but start at the band edge on a hot day.
  ForecastBundle f;
  for (int j = 0; j < 12; ++j)
    f.push_back(Disturbance{306.15, 500.0, 10.0, 0.3, true});
  const TimePoint now = parse_time_point("2018-07-03 11:00");
  double prev_slack = std::numeric_limits<double>::infinity();
  for (double mu : {100.0, 1000.0, 100000.0}) {
    MpcConfig cfg;
    cfg.horizon = 12;
    cfg.penalty_lower = mu;
    cfg.penalty_upper = mu;
    const MpcProblem p =
        build_problem(300.10, now, office_params(), f, ComfortSchedule{},
                      office_hvac(), office_geom(), cfg);
    const MpcSolution s = solve(p);
    REQUIRE(s.status == MpcStatus::kOptimal);
    double total = 0.0;
    for (double v : s.slack_lower) total += v;
    for (double v : s.slack_upper) total += v;
    CHECK(total <= prev_slack + 1e-9);
    prev_slack = total;
  }
  CHECK(prev_slack < 1e-6);
}

TEST_CASE("solver is deterministic on frozen inputs") {
  MpcConfig cfg;
  cfg.horizon = 24;
  ForecastBundle f;
  for (int j = 0; j < 24; ++j)
    f.push_back(Disturbance{304.15, 350.0, 10.0, 0.25, true});
  const MpcProblem p =
      build_problem(298.15, parse_time_point("2018-07-03 12:00"),
                    office_params(), f, ComfortSchedule{}, office_hvac(),
                    office_geom(), cfg);
  const MpcSolution a = solve(p);
  const MpcSolution b = solve(p);
  REQUIRE(a.status == MpcStatus::kOptimal);
  REQUIRE(b.status == MpcStatus::kOptimal);
  CHECK(a.objective == b.objective);
  for (int j = 0; j < 24; ++j)
    for (int k = 0; k < kNumDevices; ++k)
      CHECK(a.u[j].u[k] == b.u[j].u[k]);

  const ControlVector first = receding_action(a);
  for (int k = 0; k < kNumDevices; ++k) CHECK(first.u[k] == a.u[0].u[k]);
}

TEST_CASE("receding action demands a plan") {
  MpcSolution empty;
  CHECK_THROWS_AS(receding_action(empty), ValidationError);
}

TEST_CASE("problem export carries objective, rows, and bounds") {
  MpcConfig cfg;
  cfg.horizon = 2;
  const ForecastBundle f(2, mild());
  const MpcProblem p =
      build_problem(295.15, parse_time_point("2018-07-03 10:00"),
                    office_params(), f, ComfortSchedule{}, office_hvac(),
                    office_geom(), cfg);
  const std::string text = export_lp(p);
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("Bounds") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
}
