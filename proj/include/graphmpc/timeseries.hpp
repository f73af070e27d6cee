#pragma once

// Embedded time-series store: append-only named series with strictly
// increasing, uniformly spaced timestamps, range reads, and the two
// interpolation modes the forecasting layer needs.

#include <map>
#include <string>
#include <vector>

#include "graphmpc/civil_time.hpp"

namespace graphmpc {

struct Sample {
  TimePoint t = 0;
  double value = 0.0;
};

struct SampleSeries {
  std::string id;
  std::string unit;
  std::vector<Sample> samples;
};

class SeriesStore {
 public:
  // Appends one sample. Writes must arrive in strictly increasing time
  // order with a uniform spacing (fixed by the first two samples); the unit
  // must not change. Violations throw SeriesError.
  void write(const std::string& id, TimePoint t, double value,
             const std::string& unit = "");

  bool has(const std::string& id) const;
  std::vector<std::string> ids() const;

  // Samples with t in [from, to). An empty interval yields an empty series;
  // otherwise the interval must lie inside the stored extent (first sample
  // to one spacing past the last), or a SeriesError("range gap ...") is
  // thrown.
  SampleSeries read(const std::string& id, TimePoint from, TimePoint to) const;

  // Inclusive extent of stored sample times.
  std::pair<TimePoint, TimePoint> extent(const std::string& id) const;
  std::size_t size(const std::string& id) const;

  // Piecewise-linear interpolation, defined on [first, last].
  double value_linear(const std::string& id, TimePoint t) const;
  // Piecewise-constant (previous sample), defined on [first, last + spacing).
  double value_step(const std::string& id, TimePoint t) const;

 private:
  struct Stored {
    SampleSeries series;
    std::int64_t spacing = 0;  // 0 until the second write fixes it
  };
  const Stored& need(const std::string& id) const;

  std::map<std::string, Stored> series_;
};

// CSV ingestion. Both formats: a single header line, then one row per
// sample with a "YYYY-MM-DD HH:MM[:SS]" timestamp first.
//   weather: timestamp, ambient temperature [degC], global irradiation [W/m2]
//   price:   timestamp, price [currency/kWh]
// Ambient temperatures are stored in Kelvin.
void ingest_weather_csv(SeriesStore* store, const std::string& path);
void ingest_price_csv(SeriesStore* store, const std::string& path);

// Reserved series ids.
inline constexpr const char* kSeriesAmbientTemp = "weather.t_amb";
inline constexpr const char* kSeriesIrradiation = "weather.h_glo";
inline constexpr const char* kSeriesPrice = "price.day_ahead";

std::string to_csv(const SampleSeries& s);

}  // namespace graphmpc
