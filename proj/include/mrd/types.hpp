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

#ifndef MRD_TYPES_HPP_
#define MRD_TYPES_HPP_

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mrd {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Planar projected coordinates in meters (x east, y north).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
// Counterclockwise quarter turn.
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

enum class ErrorCode {
  kInvalidArgument = 1,
  kDegenerateTiming,
  kCollinearDegeneracy,
  kCoincidentSensors,
  kDisjointCircles,
  kAmbiguousIntersection,
  kDegenerateVertex,
  kNumericalDomain,
  kDegenerateOrientation,
  kSingularFusion,
  kInsufficientObservations,
  kDegenerateGeometry,
  kDegenerateRegion,
  kInfeasible,
  kParseError,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct Sensor {
  std::string id;
  Vec2 position;
};

using SensorArray = std::vector<Sensor>;

// One sensor hit within one antenna rotation. The ground-truth twin is
// present for simulated or calibrated data.
struct SweepObservation {
  std::string sensor_id;
  double timestamp = 0.0;  // seconds, monotone clock
  std::optional<double> truth_timestamp;
};

// Throws kInvalidArgument on non-finite coordinates or duplicate ids.
void validate_sensors(const SensorArray& sensors);

// Index of the sensor with `id`, or -1.
int find_sensor(const SensorArray& sensors, std::string_view id);

enum class RotationSense { kClockwise, kCounterclockwise };

std::string_view to_string(RotationSense sense);
RotationSense rotation_sense_from_string(std::string_view text);

struct RadarConfig {
  double period = 2.4;  // seconds per antenna rotation
  RotationSense sense = RotationSense::kClockwise;
  // Bearing (radians, math convention, 0 = east) the beam points at when a
  // sweep starts.
  double reference_bearing = 0.0;
};

void validate_radar(const RadarConfig& config);

enum class ErrorMetric {
  kVerbatim,  // sqrt(sxx^2 + syy^2)
  kRms,       // sqrt(sxx + syy), meters
};

std::string_view to_string(ErrorMetric metric);
ErrorMetric error_metric_from_string(std::string_view text);

}  // namespace mrd

#endif  // MRD_TYPES_HPP_
