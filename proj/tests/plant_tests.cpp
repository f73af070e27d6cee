#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "graphmpc/errors.hpp"
#include "graphmpc/plant.hpp"

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

PlantConfig two_node_office() {
  PlantConfig cfg;
  cfg.mode = PlantConfig::Mode::kTwoNode;
  return cfg;
}

// Independent reference: classic RK4 at a fine substep on the coupled
// balance equations
//   c_air  dTz/dt = (t_amb - Tz)/r_direct + (Tm - Tz)/r_zone_mass
//                   + q_hvac + q_int*A + f*aperture*H
//   c_mass dTm/dt = (t_amb - Tm)/r_mass_amb + (Tz - Tm)/r_zone_mass
//                   + (1-f)*aperture*H
PlantState rk4_two_node(const PlantState& s0, const ControlVector& u,
                        const Disturbance& e, const PlantConfig& cfg,
                        const ZoneGeometry& geom, const HvacConfig& hvac,
                        double dt_total, double h) {
  const double solar = cfg.solar_aperture_m2 * e.h_glo;
  const double q_air = hvac_power(u, hvac) + e.q_int * geom.floor_area_m2 +
                       cfg.solar_air_fraction * solar;
  const double q_mass = (1.0 - cfg.solar_air_fraction) * solar;
  auto fz = [&](double tz, double tm) {
    return ((e.t_amb - tz) / cfg.r_direct + (tm - tz) / cfg.r_zone_mass +
            q_air) /
           cfg.c_air;
  };
  auto fm = [&](double tz, double tm) {
    return ((e.t_amb - tm) / cfg.r_mass_amb + (tz - tm) / cfg.r_zone_mass +
            q_mass) /
           cfg.c_mass;
  };
  double tz = s0.t_zone;
  double tm = s0.t_mass;
  const int n = static_cast<int>(std::lround(dt_total / h));
  for (int i = 0; i < n; ++i) {
    const double k1z = fz(tz, tm), k1m = fm(tz, tm);
    const double k2z = fz(tz + 0.5 * h * k1z, tm + 0.5 * h * k1m);
    const double k2m = fm(tz + 0.5 * h * k1z, tm + 0.5 * h * k1m);
    const double k3z = fz(tz + 0.5 * h * k2z, tm + 0.5 * h * k2m);
    const double k3m = fm(tz + 0.5 * h * k2z, tm + 0.5 * h * k2m);
    const double k4z = fz(tz + h * k3z, tm + h * k3m);
    const double k4m = fm(tz + h * k3z, tm + h * k3m);
    tz += h * (k1z + 2 * k2z + 2 * k3z + k4z) / 6.0;
    tm += h * (k1m + 2 * k2m + 2 * k3m + k4m) / 6.0;
  }
  return {tz, tm};
}

}  // namespace

TEST_CASE("two-node step matches fine-step integration") {
  const HvacConfig hvac = office_hvac();
  const ZoneGeometry geom = office_geom();
  const PlantConfig cfg = two_node_office();

  struct Case {
    PlantState s;
    ControlVector u;
    Disturbance e;
  };
  const Case cases[] = {
      {{293.15, 293.15}, {{0, 0, 0, 0}}, {303.15, 0.0, 0.0, 0.2, false}},
      {{296.15, 291.15}, {{1, 0, 0, 0}}, {305.15, 600.0, 10.0, 0.2, true}},
      {{290.15, 295.15}, {{0, 1, 1, 1}}, {278.15, 150.0, 0.0, 0.2, false}},
      {{299.65, 297.15}, {{0.3, 0, 0, 0.4}}, {295.15, 320.0, 5.0, 0.2, true}},
  };
  for (const auto& c : cases) {
    const PlantState got = plant_step(c.s, c.u, c.e, cfg, geom, hvac, 300.0);
    const PlantState ref =
        rk4_two_node(c.s, c.u, c.e, cfg, geom, hvac, 300.0, 1.0);
    CHECK(std::abs(got.t_zone - ref.t_zone) < 1e-9);
    CHECK(std::abs(got.t_mass - ref.t_mass) < 1e-9);
  }
}

TEST_CASE("two-node step over one hour matches chained fine integration") {
  const HvacConfig hvac = office_hvac();
  const ZoneGeometry geom = office_geom();
  const PlantConfig cfg = two_node_office();
  const ControlVector u{{0.4, 0.0, 0.0, 0.0}};
  const Disturbance e{304.15, 450.0, 10.0, 0.3, true};
  const PlantState s0{297.15, 294.15};

  const PlantState one = plant_step(s0, u, e, cfg, geom, hvac, 3600.0);
  const PlantState ref = rk4_two_node(s0, u, e, cfg, geom, hvac, 3600.0, 1.0);
  CHECK(std::abs(one.t_zone - ref.t_zone) < 1e-8);
  CHECK(std::abs(one.t_mass - ref.t_mass) < 1e-8);

  // Exact discretization is a semigroup: twelve 5-minute steps equal the
  // one-hour step.
  PlantState chained = s0;
  for (int i = 0; i < 12; ++i)
    chained = plant_step(chained, u, e, cfg, geom, hvac, 300.0);
  CHECK(chained.t_zone == Approx(one.t_zone).epsilon(1e-12));
  CHECK(chained.t_mass == Approx(one.t_mass).epsilon(1e-12));
}

TEST_CASE("perfect mode reproduces the one-node model exactly") {
  const HvacConfig hvac = office_hvac();
  const ZoneGeometry geom = office_geom();
  PlantConfig cfg;
  cfg.mode = PlantConfig::Mode::kPerfectFirstOrder;
  cfg.first_order = {6600297.6, 1.0 / 58.8, 4.2};

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> temp(285.0, 305.0);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const PlantState s{temp(rng), temp(rng)};
    const ControlVector u{{frac(rng), frac(rng), frac(rng), frac(rng)}};
    const Disturbance e{temp(rng), 500.0 * frac(rng), 10.0 * frac(rng), 0.2,
                        false};
    const PlantState next = plant_step(s, u, e, cfg, geom, hvac, 300.0);
    const double expect =
        step_rc(s.t_zone, u, e, cfg.first_order, geom, hvac, 300.0);
    // Bit-for-bit: the perfect mode must reuse the same update.
    CHECK(next.t_zone == expect);
    CHECK(next.t_mass == expect);
  }
}

TEST_CASE("free-float state converges to the fixed point") {
  const HvacConfig hvac = office_hvac();
  const ZoneGeometry geom = office_geom();
  const PlantConfig cfg = two_node_office();
  const ControlVector u{{0, 0, 0, 0}};
  const Disturbance e{300.15, 200.0, 4.0, 0.2, false};

  const PlantState target = plant_fixed_point(u, e, cfg, geom, hvac);
  PlantState s{288.15, 310.15};
  // The mass node's time constant is tens of hours; give the rollout six
  // weeks so even the slow mode has fully settled.
  for (int i = 0; i < 12000; ++i)
    s = plant_step(s, u, e, cfg, geom, hvac, 300.0);
  CHECK(s.t_zone == Approx(target.t_zone).epsilon(1e-9));
  CHECK(s.t_mass == Approx(target.t_mass).epsilon(1e-9));

  // The fixed point is stationary.
  const PlantState held = plant_step(target, u, e, cfg, geom, hvac, 300.0);
  CHECK(held.t_zone == Approx(target.t_zone).epsilon(1e-12));
  CHECK(held.t_mass == Approx(target.t_mass).epsilon(1e-12));
}

TEST_CASE("fixed point balances both heat flows") {
  const HvacConfig hvac = office_hvac();
  const ZoneGeometry geom = office_geom();
  const PlantConfig cfg = two_node_office();
  const ControlVector u{{0, 0.5, 0, 0.5}};
  const Disturbance e{280.15, 100.0, 8.0, 0.2, true};
  const PlantState fp = plant_fixed_point(u, e, cfg, geom, hvac);

  const double solar = cfg.solar_aperture_m2 * e.h_glo;
  const double air_balance = (e.t_amb - fp.t_zone) / cfg.r_direct +
                             (fp.t_mass - fp.t_zone) / cfg.r_zone_mass +
                             hvac_power(u, hvac) +
                             e.q_int * geom.floor_area_m2 +
                             cfg.solar_air_fraction * solar;
  const double mass_balance = (e.t_amb - fp.t_mass) / cfg.r_mass_amb +
                              (fp.t_zone - fp.t_mass) / cfg.r_zone_mass +
                              (1.0 - cfg.solar_air_fraction) * solar;
  CHECK(std::abs(air_balance) < 1e-8);
  CHECK(std::abs(mass_balance) < 1e-8);
}

TEST_CASE("affine step: midpoint of two states maps to midpoint of images") {
  const HvacConfig hvac = office_hvac();
  const ZoneGeometry geom = office_geom();
  const PlantConfig cfg = two_node_office();
  const ControlVector u{{0.2, 0.1, 0.0, 0.0}};
  const Disturbance e{298.15, 350.0, 10.0, 0.25, true};
  const PlantState a{290.15, 294.15};
  const PlantState b{300.15, 288.15};
  const PlantState mid{(a.t_zone + b.t_zone) / 2, (a.t_mass + b.t_mass) / 2};

  const PlantState fa = plant_step(a, u, e, cfg, geom, hvac, 300.0);
  const PlantState fb = plant_step(b, u, e, cfg, geom, hvac, 300.0);
  const PlantState fm = plant_step(mid, u, e, cfg, geom, hvac, 300.0);
  CHECK(fm.t_zone == Approx((fa.t_zone + fb.t_zone) / 2).epsilon(1e-12));
  CHECK(fm.t_mass == Approx((fa.t_mass + fb.t_mass) / 2).epsilon(1e-12));
}

TEST_CASE("solar split steers which node warms first") {
  const HvacConfig hvac = office_hvac();
  const ZoneGeometry geom = office_geom();
  const ControlVector u{{0, 0, 0, 0}};
  const Disturbance e{293.15, 800.0, 0.0, 0.2, false};
  const PlantState s{293.15, 293.15};

  PlantConfig air_side = two_node_office();
  air_side.solar_air_fraction = 1.0;
  PlantConfig mass_side = two_node_office();
  mass_side.solar_air_fraction = 0.0;

  const PlantState a = plant_step(s, u, e, air_side, geom, hvac, 300.0);
  const PlantState m = plant_step(s, u, e, mass_side, geom, hvac, 300.0);
  CHECK(a.t_zone > m.t_zone);
  CHECK(a.t_mass < m.t_mass);
}

TEST_CASE("measurement noise is seed-deterministic and unbiased") {
  PlantConfig cfg = two_node_office();
  const PlantState s{295.15, 295.15};

  cfg.noise_sigma = 0.0;
  std::mt19937_64 rng0(5);
  CHECK(measure_zone_temp(s, cfg, rng0) == s.t_zone);

  cfg.noise_sigma = 0.05;
  std::mt19937_64 rng_a(42), rng_b(42);
  const double ma = measure_zone_temp(s, cfg, rng_a);
  const double mb = measure_zone_temp(s, cfg, rng_b);
  CHECK(ma == mb);
  CHECK(ma != s.t_zone);

  std::mt19937_64 rng(7);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double d = measure_zone_temp(s, cfg, rng) - s.t_zone;
    sum += d;
    sq += d * d;
  }
  const double mean = sum / n;
  const double stddev = std::sqrt(sq / n - mean * mean);
  CHECK(std::abs(mean) < 0.002);
  CHECK(stddev == Approx(0.05).epsilon(0.05));
}

TEST_CASE("implausible states abort the simulation") {
  const HvacConfig hvac = office_hvac();
  const ZoneGeometry geom = office_geom();
  const PlantConfig cfg = two_node_office();
  const ControlVector u{{0, 0, 0, 0}};
  // Ambient far outside any plausible range drags the zone across the
  // sanity limit within a day.
  const Disturbance e{500.0, 0.0, 0.0, 0.2, false};
  PlantState s{293.15, 293.15};
  CHECK_THROWS_AS(
      [&] {
        for (int i = 0; i < 288; ++i)
          s = plant_step(s, u, e, cfg, geom, hvac, 300.0);
      }(),
      SimulationError);
}

TEST_CASE("configuration validation") {
  PlantConfig cfg = two_node_office();
  CHECK_NOTHROW(cfg.require_valid());
  cfg.c_air = 0.0;
  CHECK_THROWS_AS(cfg.require_valid(), ValidationError);
  cfg = two_node_office();
  cfg.solar_air_fraction = 1.5;
  CHECK_THROWS_AS(cfg.require_valid(), ValidationError);
  cfg = two_node_office();
  cfg.noise_sigma = -0.1;
  CHECK_THROWS_AS(cfg.require_valid(), ValidationError);
  cfg = two_node_office();
  cfg.r_mass_amb = -1.0;
  CHECK_THROWS_AS(cfg.require_valid(), ValidationError);

  PlantConfig perfect;
  perfect.mode = PlantConfig::Mode::kPerfectFirstOrder;
  perfect.first_order = {0.0, 1.0, 1.0};
  CHECK_THROWS_AS(perfect.require_valid(), ValidationError);
}
