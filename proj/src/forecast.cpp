#include "graphmpc/forecast.hpp"

#include <cmath>
#include <numbers>

#include "graphmpc/errors.hpp"

namespace graphmpc {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void OccupancyConfig::require_valid() const {
  if (!(0 <= start_s && start_s < end_s && end_s <= kSecondsPerDay))
    throw ValidationError("occupancy window is invalid");
  if (gain_occupied_w_m2 < 0.0 || gain_base_w_m2 < 0.0)
    throw ValidationError("occupant gain densities must be nonnegative");
}

OccupancyStatus occupancy_profile(TimePoint t, const OccupancyConfig& cfg) {
  const int s = seconds_of_day(t);
  const bool occ =
      !is_weekend(t) && s >= cfg.start_s && s < cfg.end_s;
  return OccupancyStatus{occ,
                         occ ? cfg.gain_occupied_w_m2 : cfg.gain_base_w_m2};
}

double SyntheticWeather::ambient_k(TimePoint t) const {
  const double day_frac =
      static_cast<double>(seconds_of_day(t)) / kSecondsPerDay;
  const double slow_frac =
      static_cast<double>(t) / (slow_period_h * 3600.0);
  const double c = mean_c + daily_amp_c * std::sin(kTwoPi * (day_frac - 0.375)) +
                   slow_amp_c * std::sin(kTwoPi * slow_frac);
  return c + 273.15;
}

double SyntheticWeather::irradiation(TimePoint t) const {
  const double h = static_cast<double>(seconds_of_day(t)) / 3600.0;
  if (h <= sunrise_h || h >= sunset_h) return 0.0;
  const double phase = (h - sunrise_h) / (sunset_h - sunrise_h);
  return solar_peak_w_m2 * std::sin(std::numbers::pi * phase);
}

double SyntheticPrice::value(TimePoint t) const {
  const int hour = seconds_of_day(t) / 3600;  // constant within the hour
  const double h = static_cast<double>(hour);
  return base + daily_amp * std::sin(kTwoPi * (h - 9.0) / 24.0) +
         ripple_amp * std::sin(2.0 * kTwoPi * (h - 6.0) / 24.0);
}

ForecastService::ForecastService(const SeriesStore* store,
                                 SyntheticWeather weather,
                                 SyntheticPrice price,
                                 OccupancyConfig occupancy)
    : store_(store),
      weather_(weather),
      price_(price),
      occupancy_(occupancy) {
  occupancy_.require_valid();
  if (store_) {
    const bool amb = store_->has(kSeriesAmbientTemp);
    const bool sol = store_->has(kSeriesIrradiation);
    if (amb != sol)
      throw ValidationError(
          "ambient temperature and irradiation series must come together");
    store_weather_ = amb;
    store_price_ = store_->has(kSeriesPrice);
  }
}

Disturbance ForecastService::at(TimePoint t) const {
  Disturbance d;
  try {
    if (store_weather_) {
      d.t_amb = store_->value_linear(kSeriesAmbientTemp, t);
      d.h_glo = store_->value_linear(kSeriesIrradiation, t);
    } else {
      d.t_amb = weather_.ambient_k(t);
      d.h_glo = weather_.irradiation(t);
    }
    d.price = store_price_ ? store_->value_step(kSeriesPrice, t)
                           : price_.value(t);
  } catch (const SeriesError& e) {
    throw CoverageError("forecast gap at " + format_time_point(t) + ": " +
                        e.what());
  }
  const OccupancyStatus occ = occupancy_profile(t, occupancy_);
  d.occupied = occ.occupied;
  d.q_int = occ.q_int_w_m2;
  return d;
}

ForecastBundle ForecastService::bundle(TimePoint t, int n, double dt_s) const {
  if (n < 1) throw ValidationError("forecast bundle length must be positive");
  if (!(dt_s > 0.0)) throw ValidationError("forecast step must be positive");
  ForecastBundle out;
  out.reserve(n);
  for (int j = 0; j < n; ++j)
    out.push_back(at(t + static_cast<TimePoint>(j * dt_s)));
  return out;
}

}  // namespace graphmpc
