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

#ifndef MRD_TESTS_SUPPORT_HPP_
#define MRD_TESTS_SUPPORT_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mrd/fusion.hpp"
#include "mrd/sim.hpp"
#include "mrd/types.hpp"

namespace mrd::testing {

// Small seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  Vec2 point(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi)}; }

  // Random symmetric PSD matrix with eigenvalues in [0, scale].
  Covariance2 psd(double scale) {
    const double l1 = uniform(0.0, scale);
    const double l2 = uniform(0.0, scale);
    const double t = uniform(-kPi, kPi);
    const double c = std::cos(t);
    const double s = std::sin(t);
    return {l1 * c * c + l2 * s * s, (l1 - l2) * s * c, l1 * s * s + l2 * c * c};
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Circumcenter of a triangle from the perpendicular-bisector equations.
inline Vec2 circumcenter(Vec2 a, Vec2 b, Vec2 c) {
  const double d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
  const double a2 = a.x * a.x + a.y * a.y;
  const double b2 = b.x * b.x + b.y * b.y;
  const double c2 = c.x * c.x + c.y * c.y;
  return {(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
          (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
}

// Angle at v between the rays to a and b, from atan2 of cross and dot.
inline double angle_at(Vec2 v, Vec2 a, Vec2 b) {
  const Vec2 u = a - v;
  const Vec2 w = b - v;
  return std::atan2(std::fabs(u.x * w.y - u.y * w.x), u.x * w.x + u.y * w.y);
}

using Mat2 = std::array<std::array<double, 2>, 2>;

inline Mat2 mat(const Covariance2& c) { return {{{c.sxx, c.sxy}, {c.sxy, c.syy}}}; }

inline Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

inline Mat2 transpose(const Mat2& a) { return {{{a[0][0], a[1][0]}, {a[0][1], a[1][1]}}}; }

inline Mat2 inverse(const Mat2& a) {
  const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  return {{{a[1][1] / det, -a[0][1] / det}, {-a[1][0] / det, a[0][0] / det}}};
}

inline Mat2 rotation(double phi) {
  return {{{std::cos(phi), -std::sin(phi)}, {std::sin(phi), std::cos(phi)}}};
}

// Eigenvalues of a symmetric 2x2 matrix, ascending.
inline std::array<double, 2> eigenvalues(const Covariance2& c) {
  const double m = 0.5 * (c.sxx + c.syy);
  const double r = std::hypot(0.5 * (c.sxx - c.syy), c.sxy);
  return {m - r, m + r};
}

struct GridPoint {
  double tau = 0.0;
  double period = 0.0;
  double baseline = 0.0;
};

// 10 x 10 x 10 points in (tau, P, d). The sweep angle runs evenly over
// [0.2, pi - 0.2] so every point keeps 0.2 rad away from a multiple of pi.
inline std::vector<GridPoint> timing_grid() {
  std::vector<GridPoint> out;
  out.reserve(1000);
  for (int i = 0; i < 10; ++i) {
    const double alpha = 0.2 + i * (kPi - 0.4) / 9.0;
    for (int j = 0; j < 10; ++j) {
      const double period = 0.5 + j * 0.5;
      for (int k = 0; k < 10; ++k) {
        const double d = 10.0 * std::pow(10.0, k / 3.0);
        out.push_back({alpha * period / kTwoPi, period, d});
      }
    }
  }
  return out;
}

// A scenario with random sensors and a vessel parked inside their convex
// hull, rejected until no sensor triple is near-collinear from the vessel.
inline Scenario random_scenario(Gen& g, int n_sensors, double sigma = 0.0) {
  for (;;) {
    Scenario sc;
    for (int i = 0; i < n_sensors; ++i) {
      sc.sensors.push_back({"S" + std::to_string(i + 1), g.point(-1000.0, 1000.0)});
    }
    // Convex combination of the sensors keeps the vessel inside the hull.
    std::vector<double> w(n_sensors);
    double sum = 0.0;
    for (double& x : w) sum += (x = g.uniform(0.2, 1.0));
    Vec2 v;
    for (int i = 0; i < n_sensors; ++i) v = v + (w[i] / sum) * sc.sensors[i].position;

    bool ok = true;
    for (int i = 0; i < n_sensors && ok; ++i) {
      if (distance(v, sc.sensors[i].position) < 50.0) ok = false;
      for (int j = i + 1; j < n_sensors && ok; ++j) {
        if (distance(sc.sensors[i].position, sc.sensors[j].position) < 50.0) ok = false;
        const double a = angle_at(v, sc.sensors[i].position, sc.sensors[j].position);
        if (a < 0.05 || a > kPi - 0.05) ok = false;
      }
    }
    if (!ok) continue;
    sc.radar.period = g.uniform(1.0, 5.0);
    sc.radar.reference_bearing = g.uniform(0.0, kTwoPi);
    sc.radar.sense = g.integer(0, 1) ? RotationSense::kClockwise
                                     : RotationSense::kCounterclockwise;
    sc.trajectories.push_back({"V", {{0.0, v}}});
    sc.noise_sigma_tau = sigma;
    sc.seed = static_cast<std::uint64_t>(g.integer(0, 1 << 30));
    return sc;
  }
}

}  // namespace mrd::testing

#endif  // MRD_TESTS_SUPPORT_HPP_
