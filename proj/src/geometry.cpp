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

#include "mrd/geometry.hpp"

#include <algorithm>
#include <sstream>

namespace mrd {

namespace {

// Cosine arguments may leave [-1, 1] by this much through rounding.
constexpr double kCosineSlack = 1e-12;

double wrap_two_pi(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

}  // namespace

double angle_from_timestamps(double tau, const RadarConfig& config) {
  validate_radar(config);
  if (!(tau > 0.0) || !(tau < config.period)) {
    std::ostringstream msg;
    msg << "timestamp difference " << tau << " s outside (0, " << config.period
        << ")";
    throw Error(ErrorCode::kDegenerateTiming, msg.str());
  }
  return kTwoPi * tau / config.period;
}

bool is_collinear_angle(double alpha) {
  double m = std::fmod(std::fabs(alpha), kPi);
  return std::min(m, kPi - m) < kAlignTolerance;
}

double circle_radius(double alpha, double baseline) {
  if (!(baseline > 0.0)) {
    throw Error(ErrorCode::kCoincidentSensors, "sensor baseline must be > 0");
  }
  if (!std::isfinite(alpha) || is_collinear_angle(alpha)) {
    throw Error(ErrorCode::kCollinearDegeneracy,
                "inscribed angle within alignment tolerance of 0 or pi");
  }
  return baseline / (2.0 * std::fabs(std::sin(alpha)));
}

Circle circle_through(Vec2 si, Vec2 sj, double alpha, RotationSense sense) {
  const Vec2 u = sj - si;
  const double d = norm(u);
  if (!(d > kPointTolerance)) {
    throw Error(ErrorCode::kCoincidentSensors, "sensors coincide");
  }
  const double r = circle_radius(alpha, d);
  // s_i + (r/d) * M(alpha) * u with M = [[sin, -cos], [cos, sin]]. The signed
  // factor 1/(2 sin alpha) == +-(r/d) keeps the construction valid for sweeps
  // longer than half a turn. The clockwise antenna uses the reflection of the
  // construction across the chord, M(alpha)^T.
  const double s = std::sin(alpha);
  const double c = std::cos(alpha);
  const double k = 1.0 / (2.0 * s);
  const double side = sense == RotationSense::kCounterclockwise ? 1.0 : -1.0;
  const Vec2 center = si + k * (s * u + side * c * perp(u));
  return {center, r};
}

CircumCircle circle_center(const Sensor& si, const Sensor& sj, double alpha,
                           RotationSense sense) {
  if (distance(si.position, sj.position) <= kPointTolerance) {
    throw Error(ErrorCode::kCoincidentSensors,
                "sensors '" + si.id + "' and '" + sj.id + "' coincide");
  }
  const Circle c = circle_through(si.position, sj.position, alpha, sense);
  return {c.center, c.radius, {si.id, sj.id}};
}

Vec2 circle_intersection(const Circle& c1, const Circle& c2, Vec2 shared) {
  const Vec2 axis = c2.center - c1.center;
  const double dc = norm(axis);
  const double scale = std::max({c1.radius, c2.radius, 1.0});
  if (dc <= 1e-12 * scale) {
    if (std::fabs(c1.radius - c2.radius) <= 1e-12 * scale) {
      throw Error(ErrorCode::kAmbiguousIntersection, "circles are identical");
    }
    throw Error(ErrorCode::kDisjointCircles, "circles are concentric");
  }
  if (dc > c1.radius + c2.radius + 1e-9 * scale ||
      dc < std::fabs(c1.radius - c2.radius) - 1e-9 * scale) {
    throw Error(ErrorCode::kDisjointCircles, "circles do not intersect");
  }

  const Vec2 e = (1.0 / dc) * axis;
  const double on1 = std::fabs(distance(shared, c1.center) - c1.radius);
  const double on2 = std::fabs(distance(shared, c2.center) - c2.radius);
  const double on_tol = 1e-6 * scale;

  Vec2 other;
  if (on1 <= on_tol && on2 <= on_tol) {
    // Both circles pass through `shared`; the second intersection is its
    // mirror image across the line of centers. Better conditioned than the
    // generic chord formula for large, nearly tangent circles.
    const Vec2 rel = shared - c1.center;
    const Vec2 foot = c1.center + dot(rel, e) * e;
    other = 2.0 * foot - shared;
  } else {
    const double a =
        (dc * dc + c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * dc);
    const double h = std::sqrt(std::max(0.0, c1.radius * c1.radius - a * a));
    const Vec2 base = c1.center + a * e;
    const Vec2 p1 = base + h * perp(e);
    const Vec2 p2 = base - h * perp(e);
    other = distance(p1, shared) >= distance(p2, shared) ? p1 : p2;
  }
  if (distance(other, shared) <= kPointTolerance) {
    throw Error(ErrorCode::kAmbiguousIntersection,
                "only intersection is the shared sensor");
  }
  return other;
}

Vec2 circle_intersection(const CircumCircle& c1, const CircumCircle& c2,
                         const Sensor& shared) {
  return circle_intersection(c1.circle(), c2.circle(), shared.position);
}

double reverse_angle(Vec2 v, Vec2 si, Vec2 sj) {
  const double a = distance(si, v);
  const double b = distance(v, sj);
  if (a <= kPointTolerance || b <= kPointTolerance) {
    throw Error(ErrorCode::kDegenerateVertex, "vertex coincides with a sensor");
  }
  const double d = distance(si, sj);
  const double arg = (a * a + b * b - d * d) / (2.0 * a * b);
  if (arg > 1.0 + kCosineSlack || arg < -1.0 - kCosineSlack ||
      !std::isfinite(arg)) {
    throw Error(ErrorCode::kNumericalDomain, "cosine argument outside [-1, 1]");
  }
  return std::acos(std::clamp(arg, -1.0, 1.0));
}

double reverse_angle(Vec2 v, const Sensor& si, const Sensor& sj) {
  return reverse_angle(v, si.position, sj.position);
}

RotationSense side_sense(Vec2 v, Vec2 si, Vec2 sj) {
  return cross(sj - si, v - si) > 0.0 ? RotationSense::kCounterclockwise
                                      : RotationSense::kClockwise;
}

double sweep_bearing(Vec2 from, Vec2 to, const RadarConfig& config) {
  const Vec2 dir = to - from;
  const double math_bearing = std::atan2(dir.y, dir.x);
  const double swept = config.sense == RotationSense::kCounterclockwise
                           ? math_bearing - config.reference_bearing
                           : config.reference_bearing - math_bearing;
  return wrap_two_pi(swept);
}

}  // namespace mrd
