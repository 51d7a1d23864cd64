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

#include "mrd/fusion.hpp"

#include <algorithm>
#include <optional>
#include <unordered_set>

#include "mrd/uncertainty.hpp"

namespace mrd {

namespace {

struct PairCircle {
  int first = -1;   // sensor index
  int second = -1;  // sensor index
  Circle circle;
  double delta_r = 0.0;
};

bool is_geometric_degeneracy(ErrorCode code) {
  return code == ErrorCode::kDegenerateTiming ||
         code == ErrorCode::kCollinearDegeneracy ||
         code == ErrorCode::kCoincidentSensors;
}

Covariance2 fuse_with_sum(const Covariance2& acc, double s00, double s01,
                          double s11) {
  const double det = s00 * s11 - s01 * s01;
  const double i00 = s11 / det;
  const double i01 = -s01 / det;
  const double i11 = s00 / det;
  // K = acc * S^-1, result = acc - K * acc.
  const double k00 = acc.sxx * i00 + acc.sxy * i01;
  const double k01 = acc.sxx * i01 + acc.sxy * i11;
  const double k10 = acc.sxy * i00 + acc.syy * i01;
  const double k11 = acc.sxy * i01 + acc.syy * i11;
  const double r00 = acc.sxx - (k00 * acc.sxx + k01 * acc.sxy);
  const double r01 = acc.sxy - (k00 * acc.sxy + k01 * acc.syy);
  const double r10 = acc.sxy - (k10 * acc.sxx + k11 * acc.sxy);
  const double r11 = acc.syy - (k10 * acc.sxy + k11 * acc.syy);
  return {r00, 0.5 * (r01 + r10), r11};
}

}  // namespace

double fold_orientation(double phi) {
  while (phi > kPi / 2.0) phi -= kPi;
  while (phi <= -kPi / 2.0) phi += kPi;
  return phi;
}

ConfidenceEllipse ellipse_from_pair(const Circle& circle, double delta_r,
                                    Vec2 intersection) {
  const Vec2 dir = intersection - circle.center;
  if (norm(dir) <= kPointTolerance) {
    throw Error(ErrorCode::kDegenerateOrientation,
                "intersection coincides with the circle center");
  }
  ConfidenceEllipse e;
  e.center = intersection;
  e.semi_minor = std::fabs(delta_r);
  e.semi_major = circle.radius;
  e.orientation = fold_orientation(std::atan2(dir.y, dir.x));
  if (e.semi_minor > e.semi_major) {
    std::swap(e.semi_minor, e.semi_major);
    e.orientation = fold_orientation(e.orientation + kPi / 2.0);
  }
  return e;
}

ConfidenceEllipse ellipse_from_pair(const CircumCircle& circle, double delta_r,
                                    Vec2 intersection) {
  return ellipse_from_pair(circle.circle(), delta_r, intersection);
}

Covariance2 covariance_from_ellipse(const ConfidenceEllipse& e) {
  const double s = std::sin(e.orientation);
  const double c = std::cos(e.orientation);
  const double a2 = e.semi_minor * e.semi_minor;
  const double b2 = e.semi_major * e.semi_major;
  return {b2 * c * c + a2 * s * s, (b2 - a2) * s * c, b2 * s * s + a2 * c * c};
}

Covariance2 fuse_pairwise(const Covariance2& acc, const Covariance2& next) {
  const double s00 = acc.sxx + next.sxx;
  const double s01 = acc.sxy + next.sxy;
  const double s11 = acc.syy + next.syy;
  const double scale = s00 + s11;
  const double det = s00 * s11 - s01 * s01;
  if (!(det > 1e-12 * scale * scale)) {
    throw Error(ErrorCode::kSingularFusion, "covariance sum is singular");
  }
  return fuse_with_sum(acc, s00, s01, s11);
}

Covariance2 fuse_regularized(const Covariance2& acc, const Covariance2& next) {
  try {
    return fuse_pairwise(acc, next);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSingularFusion) throw;
  }
  const double trace = acc.trace() + next.trace();
  if (!(trace > 0.0)) return acc;
  const double eps = 1e-9 * trace;
  return fuse_with_sum(acc, acc.sxx + next.sxx + eps, acc.sxy + next.sxy,
                       acc.syy + next.syy + eps);
}

Covariance2 fuse_all(std::span<const Covariance2> covariances) {
  if (covariances.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "nothing to fuse");
  }
  Covariance2 acc = covariances.front();
  for (std::size_t i = 1; i < covariances.size(); ++i) {
    acc = fuse_regularized(acc, covariances[i]);
  }
  return acc;
}

double error_scalar(const Covariance2& cov) {
  return std::sqrt(cov.sxx * cov.sxx + cov.syy * cov.syy);
}

double rms_std(const Covariance2& cov) {
  return std::sqrt(std::max(0.0, cov.sxx + cov.syy));
}

double error_metric(const Covariance2& cov, ErrorMetric metric) {
  return metric == ErrorMetric::kVerbatim ? error_scalar(cov) : rms_std(cov);
}

double PositionEstimate::candidate_spread() const {
  double spread = 0.0;
  for (const Vec2& c : candidates) spread = std::max(spread, distance(c, point));
  return spread;
}

PositionEstimate estimate_position(
    const SensorArray& sensors, std::span<const SweepObservation> observations,
    const RadarConfig& config, const NoiseModel& noise, PairingMode pairing) {
  validate_radar(config);
  if (observations.size() < 3) {
    throw Error(ErrorCode::kInsufficientObservations,
                "need at least 3 observations, got " +
                    std::to_string(observations.size()));
  }

  struct Hit {
    int sensor;
    const SweepObservation* obs;
  };
  std::vector<Hit> hits;
  hits.reserve(observations.size());
  std::unordered_set<int> seen;
  for (const SweepObservation& o : observations) {
    const int idx = find_sensor(sensors, o.sensor_id);
    if (idx < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown sensor '" + o.sensor_id + "'");
    }
    if (!seen.insert(idx).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sensor '" + o.sensor_id + "' observed twice in one sweep");
    }
    if (noise.kind == NoiseModel::Kind::kGroundTruth && !o.truth_timestamp) {
      throw Error(ErrorCode::kInvalidArgument,
                  "observation for '" + o.sensor_id + "' lacks ground truth");
    }
    hits.push_back({idx, &o});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.obs->timestamp != b.obs->timestamp) {
      return a.obs->timestamp < b.obs->timestamp;
    }
    return a.obs->sensor_id < b.obs->sensor_id;
  });
  if (hits.back().obs->timestamp - hits.front().obs->timestamp >=
      config.period) {
    throw Error(ErrorCode::kInvalidArgument,
                "observations span more than one radar period");
  }

  std::vector<std::pair<std::size_t, std::size_t>> index_pairs;
  if (pairing == PairingMode::kConsecutive) {
    for (std::size_t k = 0; k + 1 < hits.size(); ++k) index_pairs.push_back({k, k + 1});
  } else {
    for (std::size_t i = 0; i < hits.size(); ++i) {
      for (std::size_t j = i + 1; j < hits.size(); ++j) index_pairs.push_back({i, j});
    }
  }

  std::vector<std::optional<PairCircle>> circles;
  circles.reserve(index_pairs.size());
  for (auto [i, j] : index_pairs) {
    const Hit& hi = hits[i];
    const Hit& hj = hits[j];
    const Vec2 pi = sensors[hi.sensor].position;
    const Vec2 pj = sensors[hj.sensor].position;
    const double tau = hj.obs->timestamp - hi.obs->timestamp;
    const double dtau =
        noise.kind == NoiseModel::Kind::kConstant
            ? noise.delta_tau
            : timestamp_error(hi.obs->timestamp, hj.obs->timestamp,
                              *hi.obs->truth_timestamp, *hj.obs->truth_timestamp);
    try {
      const double alpha = angle_from_timestamps(tau, config);
      PairCircle pc;
      pc.first = hi.sensor;
      pc.second = hj.sensor;
      pc.circle = circle_through(pi, pj, alpha, config.sense);
      pc.delta_r = std::fabs(delta_r_exact(tau, dtau, distance(pi, pj), config));
      circles.push_back(pc);
    } catch (const Error& e) {
      if (!is_geometric_degeneracy(e.code())) throw;
      circles.push_back(std::nullopt);
    }
  }

  PositionEstimate est;
  auto try_intersect = [&](const PairCircle& a, const PairCircle& b) {
    int shared = -1;
    if (a.first == b.first || a.first == b.second) shared = a.first;
    if (a.second == b.first || a.second == b.second) {
      if (shared >= 0) return;  // same pair
      shared = a.second;
    }
    if (shared < 0) return;
    try {
      est.candidates.push_back(
          circle_intersection(a.circle, b.circle, sensors[shared].position));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDisjointCircles &&
          e.code() != ErrorCode::kAmbiguousIntersection) {
        throw;
      }
    }
  };
  if (pairing == PairingMode::kConsecutive) {
    for (std::size_t k = 0; k + 1 < circles.size(); ++k) {
      if (circles[k] && circles[k + 1]) try_intersect(*circles[k], *circles[k + 1]);
    }
  } else {
    for (std::size_t a = 0; a < circles.size(); ++a) {
      for (std::size_t b = a + 1; b < circles.size(); ++b) {
        if (circles[a] && circles[b]) try_intersect(*circles[a], *circles[b]);
      }
    }
  }
  if (est.candidates.empty()) {
    throw Error(ErrorCode::kDegenerateGeometry,
                "no usable circle intersection (collinear or degenerate layout)");
  }

  Vec2 sum;
  for (const Vec2& c : est.candidates) sum = sum + c;
  est.point = (1.0 / static_cast<double>(est.candidates.size())) * sum;

  std::vector<Covariance2> covs;
  for (const auto& pc : circles) {
    if (!pc) continue;
    try {
      covs.push_back(covariance_from_ellipse(
          ellipse_from_pair(pc->circle, pc->delta_r, est.point)));
      est.contributing_pairs.emplace_back(sensors[pc->first].id,
                                          sensors[pc->second].id);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateOrientation) throw;
    }
  }
  if (covs.empty()) {
    throw Error(ErrorCode::kDegenerateGeometry, "no pair ellipse could be formed");
  }
  est.covariance = fuse_all(covs);
  est.error_scalar = error_scalar(est.covariance);
  est.rms_std = rms_std(est.covariance);
  return est;
}

std::vector<std::pair<RotationSense, PositionEstimate>> mirror_candidates(
    const SensorArray& sensors, std::span<const SweepObservation> observations,
    const RadarConfig& config, const NoiseModel& noise, PairingMode pairing) {
  std::vector<std::pair<RotationSense, PositionEstimate>> out;
  for (RotationSense sense :
       {RotationSense::kClockwise, RotationSense::kCounterclockwise}) {
    RadarConfig c = config;
    c.sense = sense;
    try {
      out.emplace_back(sense,
                       estimate_position(sensors, observations, c, noise, pairing));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateGeometry) throw;
    }
  }
  return out;
}

}  // namespace mrd
