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

#ifndef MRD_SIM_HPP_
#define MRD_SIM_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mrd/types.hpp"

// Deterministic radar-sweep simulator and scenario files.
//
// The antenna rides on the vessel. For each sweep the vessel position is taken
// at the sweep start and held for the rotation; each sensor is hit when the
// beam, starting at the reference bearing and turning in the configured sense,
// reaches the sensor's bearing. Noisy timestamps add zero-mean gaussian jitter
// drawn from a generator seeded by (seed, sweep, vessel).

namespace mrd {

struct Waypoint {
  double time = 0.0;
  Vec2 position;

  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

struct Trajectory {
  std::string vessel_id;
  std::vector<Waypoint> waypoints;

  // Linear interpolation, clamped to the first/last waypoint.
  Vec2 position_at(double t) const;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct GridSpec {
  int cells_x = 200;
  int cells_y = 200;
  int margin = 0;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct Scenario {
  SensorArray sensors;
  RadarConfig radar;
  std::vector<Trajectory> trajectories;
  double noise_sigma_tau = 0.0;  // seconds
  std::uint64_t seed = 0;
  int sweeps = 1;
  double start_time = 0.0;
  double sweep_interval = 0.0;  // <= 0 means one radar period
  std::optional<GridSpec> grid;

  double sweep_start(int sweep_index) const;
};

bool operator==(const Scenario& a, const Scenario& b);

// Throws kInvalidArgument naming the offending field.
void validate_scenario(const Scenario& scenario);

// Hits of one vessel during one sweep, with the position they were generated
// from.
struct Sweep {
  int index = 0;
  std::string vessel_id;
  double start_time = 0.0;
  Vec2 truth_position;
  std::vector<SweepObservation> observations;  // in sensor order
};

// One Sweep per trajectory. Throws kDegenerateVertex if a vessel sits on a
// sensor.
std::vector<Sweep> sweep_timestamps(const Scenario& scenario, int sweep_index);

// All sweeps 0..scenario.sweeps-1, sweep-major then trajectory order.
std::vector<Sweep> simulate(const Scenario& scenario);

Scenario parse_scenario(const std::string& text,
                        const std::string& source = "<memory>");
std::string serialize_scenario(const Scenario& scenario);
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

// `sweep,vessel,sensor,timestamp,truth_timestamp`
void write_observations_csv(const std::vector<Sweep>& sweeps, std::ostream& out);
// `sweep,vessel,time,x,y`
void write_truth_csv(const std::vector<Sweep>& sweeps, std::ostream& out);
// Groups rows back into sweeps (truth positions are not recovered).
std::vector<Sweep> read_observations_csv(std::istream& in,
                                         const std::string& source = "<stream>");

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

// Reference layouts.
Scenario rhine_preset();        // 6 sensors in a 500 x 1500 m box, 3 vessels
Scenario forggensee_preset();   // 5 sensors in a 2400 x 5500 m box, 2 vessels
Scenario collinear_preset();    // 3 equidistant sensors on one east-west line

}  // namespace mrd

#endif  // MRD_SIM_HPP_
