#pragma once

// Perfect-foresight forecast service. Weather and price come either from
// series loaded into the store or from the documented synthetic generators;
// occupancy follows the deterministic weekday profile. The same service
// feeds both the controller's forecasts and the plant's disturbances, so
// forecasts are exact by construction.

#include <vector>

#include "graphmpc/thermal.hpp"
#include "graphmpc/timeseries.hpp"

namespace graphmpc {

using ForecastBundle = std::vector<Disturbance>;

struct OccupancyConfig {
  int start_s = 8 * 3600;  // weekday occupied window, half-open
  int end_s = 18 * 3600;
  double gain_occupied_w_m2 = 10.0;  // internal gain density when occupied
  double gain_base_w_m2 = 0.0;

  void require_valid() const;
};

struct OccupancyStatus {
  bool occupied = false;
  double q_int_w_m2 = 0.0;
};

// Weekday flag and internal gain density at t.
OccupancyStatus occupancy_profile(TimePoint t, const OccupancyConfig& cfg);

// Synthetic ambient temperature and irradiation:
//   ambient [degC] = mean + daily_amp * sin(2 pi (s/86400 - 3/8))
//                    + slow_amp * sin(2 pi t / slow_period)
//   irradiation    = peak * sin(pi (h - sunrise)/(sunset - sunrise))
// with s the second of day, h the hour of day, irradiation clamped at 0
// outside daylight.
struct SyntheticWeather {
  double mean_c = 21.0;
  double daily_amp_c = 7.0;
  double slow_amp_c = 2.5;
  double slow_period_h = 199.0;
  double solar_peak_w_m2 = 500.0;
  double sunrise_h = 6.0;
  double sunset_h = 18.0;

  double ambient_k(TimePoint t) const;
  double irradiation(TimePoint t) const;
};

// Synthetic day-ahead price, constant within each hour:
//   base + daily_amp * sin(2 pi (h - 9)/24) + ripple_amp * sin(4 pi (h - 6)/24)
struct SyntheticPrice {
  double base = 0.25;
  double daily_amp = 0.08;
  double ripple_amp = 0.04;

  double value(TimePoint t) const;
};

class ForecastService {
 public:
  // Uses stored series where present (ambient + irradiation must come
  // together), synthetic generators otherwise. The store pointer may be
  // null; it must outlive the service.
  ForecastService(const SeriesStore* store, SyntheticWeather weather,
                  SyntheticPrice price, OccupancyConfig occupancy);

  // Full disturbance at t. Throws CoverageError when a backing series does
  // not cover t.
  Disturbance at(TimePoint t) const;

  // Disturbances at t, t + dt, ..., t + (n-1) dt.
  ForecastBundle bundle(TimePoint t, int n, double dt_s) const;

  bool weather_from_store() const { return store_weather_; }
  bool price_from_store() const { return store_price_; }

 private:
  const SeriesStore* store_;
  SyntheticWeather weather_;
  SyntheticPrice price_;
  OccupancyConfig occupancy_;
  bool store_weather_ = false;
  bool store_price_ = false;
};

}  // namespace graphmpc
