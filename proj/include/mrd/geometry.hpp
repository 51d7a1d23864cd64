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

#ifndef MRD_GEOMETRY_HPP_
#define MRD_GEOMETRY_HPP_

#include <array>
#include <string>

#include "mrd/types.hpp"

// Closed-form planar constructions behind the sweep-timestamp positioning:
// the angle a radar sweeps between two sensors, the circle through both
// sensors on which the vessel must lie, circle-circle intersection, and the
// inverse (cosine law) angle used for reverse-mode verification.
//
// Everything here is a pure function of value types.

namespace mrd {

// Inscribed angles closer than this to 0 or pi (mod pi) are collinear.
inline constexpr double kAlignTolerance = 1e-3;
// Points closer than this (meters) are treated as the same point.
inline constexpr double kPointTolerance = 1e-6;

struct Circle {
  Vec2 center;
  double radius = 0.0;
};

struct CircumCircle {
  Vec2 center;
  double radius = 0.0;
  std::array<std::string, 2> pair;

  Circle circle() const { return {center, radius}; }
};

// Angle swept by the antenna in tau seconds: 2*pi*tau/P. Requires 0 < tau < P.
double angle_from_timestamps(double tau, const RadarConfig& config);

// True when alpha lies within kAlignTolerance of a multiple of pi.
bool is_collinear_angle(double alpha);

// d / sqrt(2(1 - cos 2 alpha)) == d / (2|sin alpha|).
double circle_radius(double alpha, double baseline);

// Circle through si and sj seen under the sweep angle alpha from si to sj,
// for an antenna turning in `sense`. Works on raw points.
Circle circle_through(Vec2 si, Vec2 sj, double alpha, RotationSense sense);

CircumCircle circle_center(const Sensor& si, const Sensor& sj, double alpha,
                           RotationSense sense);

// The intersection of c1 and c2 that is not `shared`.
Vec2 circle_intersection(const Circle& c1, const Circle& c2, Vec2 shared);
Vec2 circle_intersection(const CircumCircle& c1, const CircumCircle& c2,
                         const Sensor& shared);

// Unsigned angle at v subtended by si and sj, in (0, pi], via the cosine law.
double reverse_angle(Vec2 v, Vec2 si, Vec2 sj);
double reverse_angle(Vec2 v, const Sensor& si, const Sensor& sj);

// The rotation sense for which an inscribed angle (< pi) swept from si to sj
// puts v on the constructed circle.
RotationSense side_sense(Vec2 v, Vec2 si, Vec2 sj);

// Bearing from `from` to `to` measured in the antenna's turning direction
// from the reference bearing, in [0, 2*pi).
double sweep_bearing(Vec2 from, Vec2 to, const RadarConfig& config);

}  // namespace mrd

#endif  // MRD_GEOMETRY_HPP_
