#include "graphmpc/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "graphmpc/errors.hpp"

namespace graphmpc {

void SeriesStore::write(const std::string& id, TimePoint t, double value,
                        const std::string& unit) {
  if (id.empty()) throw SeriesError("series id must not be empty");
  if (!std::isfinite(value))
    throw SeriesError("series '" + id + "': non-finite sample rejected");
  Stored& st = series_[id];
  if (st.series.samples.empty()) {
    st.series.id = id;
    st.series.unit = unit;
  } else {
    if (unit != st.series.unit)
      throw SeriesError("series '" + id + "': unit changed from '" +
                        st.series.unit + "' to '" + unit + "'");
    const TimePoint last = st.series.samples.back().t;
    if (t <= last)
      throw SeriesError("series '" + id + "': out-of-order write at " +
                        format_time_point(t));
    if (st.spacing == 0) {
      st.spacing = t - last;
    } else if (t - last != st.spacing) {
      throw SeriesError("series '" + id + "': non-uniform spacing at " +
                        format_time_point(t));
    }
  }
  st.series.samples.push_back(Sample{t, value});
}

bool SeriesStore::has(const std::string& id) const {
  return series_.count(id) > 0;
}

std::vector<std::string> SeriesStore::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, st] : series_) out.push_back(id);
  return out;
}

const SeriesStore::Stored& SeriesStore::need(const std::string& id) const {
  const auto it = series_.find(id);
  if (it == series_.end())
    throw SeriesError("unknown series '" + id + "'");
  return it->second;
}

SampleSeries SeriesStore::read(const std::string& id, TimePoint from,
                               TimePoint to) const {
  const Stored& st = need(id);
  SampleSeries out;
  out.id = id;
  out.unit = st.series.unit;
  if (to <= from) return out;
  const TimePoint first = st.series.samples.front().t;
  const TimePoint last = st.series.samples.back().t;
  const TimePoint end = last + std::max<std::int64_t>(st.spacing, 1);
  if (from < first || to > end)
    throw SeriesError("range gap in series '" + id + "': requested [" +
                      format_time_point(from) + ", " + format_time_point(to) +
                      ") but stored extent is [" + format_time_point(first) +
                      ", " + format_time_point(end) + ")");
  const auto lo = std::lower_bound(
      st.series.samples.begin(), st.series.samples.end(), from,
      [](const Sample& s, TimePoint v) { return s.t < v; });
  const auto hi = std::lower_bound(
      st.series.samples.begin(), st.series.samples.end(), to,
      [](const Sample& s, TimePoint v) { return s.t < v; });
  out.samples.assign(lo, hi);
  return out;
}

std::pair<TimePoint, TimePoint> SeriesStore::extent(
    const std::string& id) const {
  const Stored& st = need(id);
  return {st.series.samples.front().t, st.series.samples.back().t};
}

std::size_t SeriesStore::size(const std::string& id) const {
  return need(id).series.samples.size();
}

double SeriesStore::value_linear(const std::string& id, TimePoint t) const {
  const Stored& st = need(id);
  const auto& v = st.series.samples;
  if (t < v.front().t || t > v.back().t)
    throw SeriesError("range gap in series '" + id + "' at " +
                      format_time_point(t));
  const auto hi = std::lower_bound(
      v.begin(), v.end(), t,
      [](const Sample& s, TimePoint x) { return s.t < x; });
  if (hi->t == t) return hi->value;
  const auto lo = hi - 1;
  const double w = static_cast<double>(t - lo->t) /
                   static_cast<double>(hi->t - lo->t);
  return lo->value + w * (hi->value - lo->value);
}

double SeriesStore::value_step(const std::string& id, TimePoint t) const {
  const Stored& st = need(id);
  const auto& v = st.series.samples;
  const TimePoint end = v.back().t + std::max<std::int64_t>(st.spacing, 1);
  if (t < v.front().t || t >= end)
    throw SeriesError("range gap in series '" + id + "' at " +
                      format_time_point(t));
  const auto hi = std::upper_bound(
      v.begin(), v.end(), t,
      [](TimePoint x, const Sample& s) { return x < s.t; });
  return (hi - 1)->value;
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  for (std::string& s : out) {
    const std::size_t b = s.find_first_not_of(" \t");
    const std::size_t e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
  }
  return out;
}

double parse_field(const std::string& s, const std::string& path, int row) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw ValidationError(path + ": row " + std::to_string(row) +
                          ": not a number: '" + s + "'");
  return v;
}

void ingest_csv(SeriesStore* store, const std::string& path,
                std::size_t columns,
                const std::vector<std::string>& series_ids,
                const std::vector<std::string>& units, double offset) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::string line;
  int row = 0;
  bool header_skipped = false;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_row(line);
    if (!header_skipped) {
      header_skipped = true;
      continue;
    }
    if (fields.size() != columns + 1)
      throw ValidationError(path + ": row " + std::to_string(row) +
                            ": expected " + std::to_string(columns + 1) +
                            " columns");
    const TimePoint t = parse_time_point(fields[0]);
    for (std::size_t k = 0; k < columns; ++k) {
      const double v = parse_field(fields[k + 1], path, row);
      store->write(series_ids[k], t, k == 0 ? v + offset : v, units[k]);
    }
  }
  if (!header_skipped)
    throw ValidationError(path + ": file is empty");
}

}  // namespace

void ingest_weather_csv(SeriesStore* store, const std::string& path) {
  ingest_csv(store, path, 2, {kSeriesAmbientTemp, kSeriesIrradiation},
             {"K", "W_per_m2"}, 273.15);
}

void ingest_price_csv(SeriesStore* store, const std::string& path) {
  ingest_csv(store, path, 1, {kSeriesPrice}, {"per_kWh"}, 0.0);
}

std::string to_csv(const SampleSeries& s) {
  std::string out = "time," + s.id + (s.unit.empty() ? "" : " [" + s.unit + "]") + "\n";
  char buf[64];
  for (const Sample& smp : s.samples) {
    std::snprintf(buf, sizeof(buf), "%.17g", smp.value);
    out += format_time_point(smp.t) + "," + buf + "\n";
  }
  return out;
}

}  // namespace graphmpc
