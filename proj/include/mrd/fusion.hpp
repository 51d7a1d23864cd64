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

#ifndef MRD_FUSION_HPP_
#define MRD_FUSION_HPP_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mrd/geometry.hpp"
#include "mrd/types.hpp"

namespace mrd {

// Symmetric 2x2 covariance, meters^2.
struct Covariance2 {
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;

  double trace() const { return sxx + syy; }
  double det() const { return sxx * syy - sxy * sxy; }

  static Covariance2 identity(double scale = 1.0) { return {scale, 0.0, scale}; }
  friend bool operator==(const Covariance2&, const Covariance2&) = default;
};

// Semi-axes and orientation of a per-pair confidence region. The major axis
// points from the circle center to the position estimate.
struct ConfidenceEllipse {
  Vec2 center;
  double semi_minor = 0.0;
  double semi_major = 0.0;
  double orientation = 0.0;  // radians in (-pi/2, pi/2]
};

// Folds an angle into (-pi/2, pi/2].
double fold_orientation(double phi);

// a = |delta_r|, b = r, centered at the intersection. If |delta_r| exceeds the
// radius the axes are swapped and the orientation turned a quarter, which
// leaves the covariance unchanged.
ConfidenceEllipse ellipse_from_pair(const Circle& circle, double delta_r,
                                    Vec2 intersection);
ConfidenceEllipse ellipse_from_pair(const CircumCircle& circle, double delta_r,
                                    Vec2 intersection);

Covariance2 covariance_from_ellipse(const ConfidenceEllipse& e);

// acc - acc (acc + next)^-1 acc. Throws kSingularFusion when acc + next has
// determinant at or below 1e-12 * trace^2.
Covariance2 fuse_pairwise(const Covariance2& acc, const Covariance2& next);

// fuse_pairwise, but a singular sum is regularized with 1e-9 * trace * I.
Covariance2 fuse_regularized(const Covariance2& acc, const Covariance2& next);

// Left fold of fuse_regularized in the given order. Requires at least one
// matrix.
Covariance2 fuse_all(std::span<const Covariance2> covariances);

// sqrt(sxx^2 + syy^2).
double error_scalar(const Covariance2& cov);
// sqrt(sxx + syy), meters.
double rms_std(const Covariance2& cov);
double error_metric(const Covariance2& cov, ErrorMetric metric);

// Source of the per-pair timestamp error delta_tau.
struct NoiseModel {
  enum class Kind { kGroundTruth, kConstant };
  Kind kind = Kind::kGroundTruth;
  double delta_tau = 0.0;  // used by kConstant

  static NoiseModel ground_truth() { return {Kind::kGroundTruth, 0.0}; }
  static NoiseModel constant(double delta_tau) {
    return {Kind::kConstant, delta_tau};
  }
};

enum class PairingMode {
  kConsecutive,  // (s1,s2), (s2,s3), ... in timestamp order
  kAllPairs,
};

struct PositionEstimate {
  Vec2 point;
  Covariance2 covariance;
  double error_scalar = 0.0;
  double rms_std = 0.0;
  std::vector<std::pair<std::string, std::string>> contributing_pairs;
  std::vector<Vec2> candidates;

  double error(ErrorMetric metric) const {
    return metric == ErrorMetric::kVerbatim ? error_scalar : rms_std;
  }
  // Largest distance from a candidate to the consensus point.
  double candidate_spread() const;
};

// Locates one vessel from the hits of one antenna rotation.
//
// Observations are sorted by timestamp and paired; each usable pair yields a
// circle, adjacent circles are intersected away from their shared sensor, and
// the consensus point is the centroid of those intersections. Per-pair
// ellipses are fused left to right in pair order. Pairs in the collinear band
// are skipped.
//
// Throws kInsufficientObservations (< 3 hits) and kDegenerateGeometry (no
// intersection could be formed).
PositionEstimate estimate_position(
    const SensorArray& sensors, std::span<const SweepObservation> observations,
    const RadarConfig& config, const NoiseModel& noise,
    PairingMode pairing = PairingMode::kConsecutive);

// Estimates under both rotation senses, for data whose sense is unknown.
// Failed senses are omitted.
std::vector<std::pair<RotationSense, PositionEstimate>> mirror_candidates(
    const SensorArray& sensors, std::span<const SweepObservation> observations,
    const RadarConfig& config, const NoiseModel& noise,
    PairingMode pairing = PairingMode::kConsecutive);

}  // namespace mrd

#endif  // MRD_FUSION_HPP_
