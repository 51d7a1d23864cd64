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

#include "mrd/types.hpp"

#include <unordered_set>

namespace mrd {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDegenerateTiming: return "DegenerateTiming";
    case ErrorCode::kCollinearDegeneracy: return "CollinearDegeneracy";
    case ErrorCode::kCoincidentSensors: return "CoincidentSensors";
    case ErrorCode::kDisjointCircles: return "DisjointCircles";
    case ErrorCode::kAmbiguousIntersection: return "AmbiguousIntersection";
    case ErrorCode::kDegenerateVertex: return "DegenerateVertex";
    case ErrorCode::kNumericalDomain: return "NumericalDomain";
    case ErrorCode::kDegenerateOrientation: return "DegenerateOrientation";
    case ErrorCode::kSingularFusion: return "SingularFusion";
    case ErrorCode::kInsufficientObservations: return "InsufficientObservations";
    case ErrorCode::kDegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::kDegenerateRegion: return "DegenerateRegion";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

void validate_sensors(const SensorArray& sensors) {
  std::unordered_set<std::string> seen;
  for (const Sensor& s : sensors) {
    if (!std::isfinite(s.position.x) || !std::isfinite(s.position.y)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sensor '" + s.id + "' has non-finite coordinates");
    }
    if (!seen.insert(s.id).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate sensor id '" + s.id + "'");
    }
  }
}

int find_sensor(const SensorArray& sensors, std::string_view id) {
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    if (sensors[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

std::string_view to_string(RotationSense sense) {
  return sense == RotationSense::kClockwise ? "clockwise" : "counterclockwise";
}

RotationSense rotation_sense_from_string(std::string_view text) {
  if (text == "clockwise" || text == "cw") return RotationSense::kClockwise;
  if (text == "counterclockwise" || text == "ccw") {
    return RotationSense::kCounterclockwise;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown rotation sense '" + std::string(text) + "'");
}

void validate_radar(const RadarConfig& config) {
  if (!(config.period > 0.0) || !std::isfinite(config.period)) {
    throw Error(ErrorCode::kInvalidArgument, "period_P must be > 0");
  }
  if (!std::isfinite(config.reference_bearing)) {
    throw Error(ErrorCode::kInvalidArgument, "reference_bearing must be finite");
  }
}

std::string_view to_string(ErrorMetric metric) {
  return metric == ErrorMetric::kVerbatim ? "verbatim" : "rms";
}

ErrorMetric error_metric_from_string(std::string_view text) {
  if (text == "verbatim") return ErrorMetric::kVerbatim;
  if (text == "rms") return ErrorMetric::kRms;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown error metric '" + std::string(text) + "'");
}

}  // namespace mrd
