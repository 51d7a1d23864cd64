// Copyright 2026 The MRD Positioning Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mrd/sim.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "mrd/geometry.hpp"

namespace mrd {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

[[noreturn]] void parse_fail(const std::string& source, const std::string& what) {
  throw Error(ErrorCode::kParseError, source + ": " + what);
}

// Maps a byte offset to a 1-based line number.
std::size_t line_of(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + offset, '\n'));
}

const Json& require(const Json& obj, const char* key, const std::string& path,
                    const std::string& source) {
  if (!obj.is_object() || !obj.contains(key)) {
    parse_fail(source, "missing field '" + path + key + "'");
  }
  return obj.at(key);
}

double require_number(const Json& obj, const char* key, const std::string& path,
                      const std::string& source) {
  const Json& v = require(obj, key, path, source);
  if (!v.is_number()) {
    parse_fail(source, "field '" + path + key + "' must be a number");
  }
  return v.get<double>();
}

double optional_number(const Json& obj, const char* key, double fallback,
                       const std::string& path, const std::string& source) {
  if (!obj.contains(key)) return fallback;
  return require_number(obj, key, path, source);
}

int require_int(const Json& obj, const char* key, const std::string& path,
                const std::string& source) {
  const Json& v = require(obj, key, path, source);
  if (!v.is_number_integer()) {
    parse_fail(source, "field '" + path + key + "' must be an integer");
  }
  return v.get<int>();
}

std::string require_string(const Json& obj, const char* key,
                           const std::string& path, const std::string& source) {
  const Json& v = require(obj, key, path, source);
  if (!v.is_string()) {
    parse_fail(source, "field '" + path + key + "' must be a string");
  }
  return v.get<std::string>();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double_field(const std::string& text, const std::string& source,
                          std::size_t line, const char* field) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    parse_fail(source, "line " + std::to_string(line) + ": field '" + field +
                           "' is not a number: '" + text + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

Vec2 Trajectory::position_at(double t) const {
  if (waypoints.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "trajectory '" + vessel_id + "' has no waypoints");
  }
  if (t <= waypoints.front().time) return waypoints.front().position;
  if (t >= waypoints.back().time) return waypoints.back().position;
  auto it = std::upper_bound(
      waypoints.begin(), waypoints.end(), t,
      [](double value, const Waypoint& w) { return value < w.time; });
  const Waypoint& b = *it;
  const Waypoint& a = *(it - 1);
  const double f = (t - a.time) / (b.time - a.time);
  return a.position + f * (b.position - a.position);
}

double Scenario::sweep_start(int sweep_index) const {
  const double interval = sweep_interval > 0.0 ? sweep_interval : radar.period;
  return start_time + interval * static_cast<double>(sweep_index);
}

bool operator==(const Scenario& a, const Scenario& b) {
  auto same_sensors = [](const SensorArray& x, const SensorArray& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].id != y[i].id || !(x[i].position == y[i].position)) return false;
    }
    return true;
  };
  return same_sensors(a.sensors, b.sensors) && a.radar.period == b.radar.period &&
         a.radar.sense == b.radar.sense &&
         a.radar.reference_bearing == b.radar.reference_bearing &&
         a.trajectories == b.trajectories &&
         a.noise_sigma_tau == b.noise_sigma_tau && a.seed == b.seed &&
         a.sweeps == b.sweeps && a.start_time == b.start_time &&
         a.sweep_interval == b.sweep_interval && a.grid == b.grid;
}

void validate_scenario(const Scenario& scenario) {
  validate_sensors(scenario.sensors);
  validate_radar(scenario.radar);
  if (!(scenario.noise_sigma_tau >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "noise_sigma_tau must be >= 0");
  }
  if (scenario.sweeps < 0) {
    throw Error(ErrorCode::kInvalidArgument, "sweeps must be >= 0");
  }
  for (const Trajectory& t : scenario.trajectories) {
    if (t.waypoints.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "trajectory '" + t.vessel_id + "' has no waypoints");
    }
    for (std::size_t i = 1; i < t.waypoints.size(); ++i) {
      if (!(t.waypoints[i].time > t.waypoints[i - 1].time)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "trajectory '" + t.vessel_id +
                        "' waypoint times must be strictly increasing");
      }
    }
  }
  if (scenario.grid) {
    const GridSpec& g = *scenario.grid;
    if (g.cells_x <= 0 || g.cells_y <= 0 || g.margin < 0) {
      throw Error(ErrorCode::kInvalidArgument, "grid dimensions must be positive");
    }
  }
}

std::vector<Sweep> sweep_timestamps(const Scenario& scenario, int sweep_index) {
  const double start = scenario.sweep_start(sweep_index);
  const double period = scenario.radar.period;
  std::vector<Sweep> out;
  out.reserve(scenario.trajectories.size());
  for (std::size_t v = 0; v < scenario.trajectories.size(); ++v) {
    const Trajectory& traj = scenario.trajectories[v];
    Sweep sweep;
    sweep.index = sweep_index;
    sweep.vessel_id = traj.vessel_id;
    sweep.start_time = start;
    sweep.truth_position = traj.position_at(start);

    std::seed_seq seq{static_cast<std::uint32_t>(scenario.seed),
                      static_cast<std::uint32_t>(scenario.seed >> 32),
                      static_cast<std::uint32_t>(sweep_index),
                      static_cast<std::uint32_t>(v)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> jitter(0.0, 1.0);

    for (const Sensor& s : scenario.sensors) {
      if (distance(s.position, sweep.truth_position) <= kPointTolerance) {
        throw Error(ErrorCode::kDegenerateVertex,
                    "vessel '" + traj.vessel_id + "' coincides with sensor '" +
                        s.id + "' at sweep " + std::to_string(sweep_index));
      }
      const double bearing =
          sweep_bearing(sweep.truth_position, s.position, scenario.radar);
      const double truth = start + bearing / kTwoPi * period;
      double measured = truth;
      if (scenario.noise_sigma_tau > 0.0) {
        measured += scenario.noise_sigma_tau * jitter(rng);
      }
      sweep.observations.push_back({s.id, measured, truth});
    }
    out.push_back(std::move(sweep));
  }
  return out;
}

std::vector<Sweep> simulate(const Scenario& scenario) {
  validate_scenario(scenario);
  std::vector<Sweep> all;
  for (int k = 0; k < scenario.sweeps; ++k) {
    auto batch = sweep_timestamps(scenario, k);
    std::move(batch.begin(), batch.end(), std::back_inserter(all));
  }
  return all;
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_fail(source, "line " + std::to_string(line_of(text, e.byte)) +
                           ": malformed JSON (" + e.what() + ")");
  }
  if (!doc.is_object()) parse_fail(source, "top level must be an object");

  const int schema = require_int(doc, "schema", "", source);
  if (schema != kSchemaVersion) {
    parse_fail(source, "unsupported schema " + std::to_string(schema));
  }

  Scenario sc;
  const Json& radar = require(doc, "radar", "", source);
  sc.radar.period = require_number(radar, "period_P", "radar.", source);
  if (radar.contains("rotation_sense")) {
    try {
      sc.radar.sense = rotation_sense_from_string(
          require_string(radar, "rotation_sense", "radar.", source));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInvalidArgument) throw;
      parse_fail(source, std::string("field 'radar.rotation_sense': ") + e.what());
    }
  }
  sc.radar.reference_bearing =
      optional_number(radar, "reference_bearing", 0.0, "radar.", source);

  const Json& sensors = require(doc, "sensors", "", source);
  if (!sensors.is_array()) parse_fail(source, "field 'sensors' must be an array");
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const std::string path = "sensors[" + std::to_string(i) + "].";
    sc.sensors.push_back({require_string(sensors[i], "id", path, source),
                          {require_number(sensors[i], "x", path, source),
                           require_number(sensors[i], "y", path, source)}});
  }

  if (doc.contains("trajectories")) {
    const Json& trajs = doc.at("trajectories");
    if (!trajs.is_array()) {
      parse_fail(source, "field 'trajectories' must be an array");
    }
    for (std::size_t i = 0; i < trajs.size(); ++i) {
      const std::string path = "trajectories[" + std::to_string(i) + "].";
      Trajectory t;
      t.vessel_id = require_string(trajs[i], "vessel_id", path, source);
      const Json& wps = require(trajs[i], "waypoints", path, source);
      if (!wps.is_array()) {
        parse_fail(source, "field '" + path + "waypoints' must be an array");
      }
      for (std::size_t k = 0; k < wps.size(); ++k) {
        const std::string wp = path + "waypoints[" + std::to_string(k) + "].";
        t.waypoints.push_back({require_number(wps[k], "t", wp, source),
                               {require_number(wps[k], "x", wp, source),
                                require_number(wps[k], "y", wp, source)}});
      }
      sc.trajectories.push_back(std::move(t));
    }
  }

  sc.noise_sigma_tau = optional_number(doc, "noise_sigma_tau", 0.0, "", source);
  if (doc.contains("seed")) {
    const Json& seed = doc.at("seed");
    if (!seed.is_number_integer()) {
      parse_fail(source, "field 'seed' must be an integer");
    }
    sc.seed = seed.is_number_unsigned() ? seed.get<std::uint64_t>()
                                        : static_cast<std::uint64_t>(
                                              seed.get<std::int64_t>());
  }
  if (doc.contains("sweeps")) sc.sweeps = require_int(doc, "sweeps", "", source);
  sc.start_time = optional_number(doc, "start_time", 0.0, "", source);
  sc.sweep_interval = optional_number(doc, "sweep_interval", 0.0, "", source);
  if (doc.contains("grid")) {
    const Json& g = doc.at("grid");
    sc.grid = GridSpec{require_int(g, "cells_x", "grid.", source),
                       require_int(g, "cells_y", "grid.", source),
                       g.contains("margin") ? require_int(g, "margin", "grid.", source)
                                            : 0};
  }

  try {
    validate_scenario(sc);
  } catch (const Error& e) {
    parse_fail(source, e.what());
  }
  return sc;
}

std::string serialize_scenario(const Scenario& sc) {
  Json doc;
  doc["schema"] = kSchemaVersion;
  doc["radar"] = {{"period_P", sc.radar.period},
                  {"rotation_sense", std::string(to_string(sc.radar.sense))},
                  {"reference_bearing", sc.radar.reference_bearing}};
  Json sensors = Json::array();
  for (const Sensor& s : sc.sensors) {
    sensors.push_back({{"id", s.id}, {"x", s.position.x}, {"y", s.position.y}});
  }
  doc["sensors"] = sensors;
  Json trajs = Json::array();
  for (const Trajectory& t : sc.trajectories) {
    Json wps = Json::array();
    for (const Waypoint& w : t.waypoints) {
      wps.push_back({{"t", w.time}, {"x", w.position.x}, {"y", w.position.y}});
    }
    trajs.push_back({{"vessel_id", t.vessel_id}, {"waypoints", wps}});
  }
  doc["trajectories"] = trajs;
  doc["noise_sigma_tau"] = sc.noise_sigma_tau;
  doc["seed"] = sc.seed;
  doc["sweeps"] = sc.sweeps;
  doc["start_time"] = sc.start_time;
  doc["sweep_interval"] = sc.sweep_interval;
  if (sc.grid) {
    doc["grid"] = {{"cells_x", sc.grid->cells_x},
                   {"cells_y", sc.grid->cells_y},
                   {"margin", sc.grid->margin}};
  }
  return doc.dump(2) + "\n";
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, path + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, path + ": cannot write scenario");
  out << serialize_scenario(scenario);
  if (!out) throw Error(ErrorCode::kIoError, path + ": write failed");
}

void write_observations_csv(const std::vector<Sweep>& sweeps, std::ostream& out) {
  out << "sweep,vessel,sensor,timestamp,truth_timestamp\n";
  for (const Sweep& s : sweeps) {
    for (const SweepObservation& o : s.observations) {
      out << s.index << ',' << s.vessel_id << ',' << o.sensor_id << ','
          << format_double(o.timestamp) << ','
          << (o.truth_timestamp ? format_double(*o.truth_timestamp) : "") << '\n';
    }
  }
}

void write_truth_csv(const std::vector<Sweep>& sweeps, std::ostream& out) {
  out << "sweep,vessel,time,x,y\n";
  for (const Sweep& s : sweeps) {
    out << s.index << ',' << s.vessel_id << ',' << format_double(s.start_time)
        << ',' << format_double(s.truth_position.x) << ','
        << format_double(s.truth_position.y) << '\n';
  }
}

std::vector<Sweep> read_observations_csv(std::istream& in,
                                         const std::string& source) {
  std::string line;
  if (!std::getline(in, line) ||
      line != "sweep,vessel,sensor,timestamp,truth_timestamp") {
    parse_fail(source, "line 1: expected header "
                       "'sweep,vessel,sensor,timestamp,truth_timestamp'");
  }
  std::vector<Sweep> out;
  std::map<std::pair<int, std::string>, std::size_t> index;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 5) {
      parse_fail(source, "line " + std::to_string(lineno) + ": expected 5 fields");
    }
    int sweep = 0;
    auto [p, ec] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), sweep);
    if (ec != std::errc() || p != f[0].data() + f[0].size()) {
      parse_fail(source, "line " + std::to_string(lineno) +
                             ": field 'sweep' is not an integer");
    }
    SweepObservation o;
    o.sensor_id = f[2];
    o.timestamp = parse_double_field(f[3], source, lineno, "timestamp");
    if (!f[4].empty()) {
      o.truth_timestamp = parse_double_field(f[4], source, lineno, "truth_timestamp");
    }
    auto key = std::make_pair(sweep, f[1]);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      Sweep s;
      s.index = sweep;
      s.vessel_id = f[1];
      s.start_time = o.timestamp;
      out.push_back(std::move(s));
    }
    Sweep& s = out[it->second];
    s.start_time = std::min(s.start_time, o.timestamp);
    s.observations.push_back(std::move(o));
  }
  return out;
}

Scenario rhine_preset() {
  Scenario sc;
  sc.radar = {2.4, RotationSense::kClockwise, 0.0};
  sc.sensors = {{"P1", {0.0, 0.0}},      {"P2", {500.0, 150.0}},
                {"P3", {20.0, 600.0}},   {"P4", {480.0, 900.0}},
                {"P5", {0.0, 1350.0}},   {"P6", {500.0, 1500.0}}};
  sc.trajectories = {
      {"ROYAL_EMERALD", {{0.0, {250.0, 100.0}}, {570.0, {260.0, 1400.0}}}},
      {"IRIS", {{0.0, {210.0, 1420.0}}, {570.0, {230.0, 80.0}}}},
      {"CONTARGO_1",
       {{0.0, {320.0, 120.0}}, {300.0, {300.0, 760.0}}, {570.0, {330.0, 1380.0}}}}};
  sc.noise_sigma_tau = 2.4e-5;  // 1e-5 of the period
  sc.seed = 20231003;
  sc.sweeps = 20;
  sc.sweep_interval = 30.0;
  sc.grid = GridSpec{528, 888, 250};
  return sc;
}

Scenario forggensee_preset() {
  Scenario sc;
  sc.radar = {2.4, RotationSense::kClockwise, 0.0};
  sc.sensors = {{"F1", {0.0, 0.0}},       {"F2", {2400.0, 1200.0}},
                {"F3", {300.0, 2900.0}},  {"F4", {2100.0, 4300.0}},
                {"F5", {900.0, 5500.0}}};
  sc.trajectories = {
      {"MS_ALLGAEU",
       {{0.0, {1200.0, 400.0}}, {900.0, {1400.0, 2400.0}}, {1800.0, {1150.0, 450.0}}}},
      {"MS_FUESSEN",
       {{0.0, {1100.0, 300.0}}, {1800.0, {1300.0, 5000.0}}, {3600.0, {1050.0, 350.0}}}}};
  sc.noise_sigma_tau = 2.4e-5;
  sc.seed = 20230615;
  sc.sweeps = 60;
  sc.sweep_interval = 60.0;
  sc.grid = GridSpec{528, 888, 250};
  return sc;
}

Scenario collinear_preset() {
  Scenario sc;
  sc.radar = {2.4, RotationSense::kClockwise, 0.0};
  sc.sensors = {{"C1", {0.0, 0.0}}, {"C2", {500.0, 0.0}}, {"C3", {1000.0, 0.0}}};
  sc.trajectories = {{"PROBE", {{0.0, {200.0, 400.0}}, {300.0, {700.0, -400.0}}}}};
  sc.noise_sigma_tau = 2.4e-5;
  sc.seed = 5;
  sc.sweeps = 10;
  sc.sweep_interval = 30.0;
  sc.grid = GridSpec{200, 200, 0};
  return sc;
}

}  // namespace mrd
