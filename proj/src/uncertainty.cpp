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

#include "mrd/uncertainty.hpp"

#include <sstream>

#include "mrd/geometry.hpp"

namespace mrd {

namespace {

// Returns 4*pi*tau/P after checking the sweep angle 2*pi*tau/P is usable.
double doubled_angle(double tau, double baseline, const RadarConfig& config) {
  validate_radar(config);
  if (!(baseline > 0.0)) {
    throw Error(ErrorCode::kCoincidentSensors, "sensor baseline must be > 0");
  }
  if (!(tau > 0.0) || !(tau < config.period)) {
    std::ostringstream msg;
    msg << "timestamp difference " << tau << " s outside (0, " << config.period
        << ")";
    throw Error(ErrorCode::kDegenerateTiming, msg.str());
  }
  const double alpha = kTwoPi * tau / config.period;
  if (is_collinear_angle(alpha)) {
    throw Error(ErrorCode::kCollinearDegeneracy,
                "sweep angle within alignment tolerance of 0 or pi");
  }
  return 2.0 * alpha;
}

}  // namespace

double timestamp_error(double measured_i, double measured_j, double truth_i,
                       double truth_j) {
  return (measured_j - measured_i) - (truth_j - truth_i);
}

double radius_from_tau(double tau, double baseline, const RadarConfig& config) {
  const double theta = doubled_angle(tau, baseline, config);
  return baseline / std::sqrt(2.0 - 2.0 * std::cos(theta));
}

double radius_rate(double tau, double baseline, const RadarConfig& config) {
  const double theta = doubled_angle(tau, baseline, config);
  const double denom = 2.0 - 2.0 * std::cos(theta);
  return -baseline * (4.0 * kPi / config.period) * std::sin(theta) /
         (denom * std::sqrt(denom));
}

double delta_r_exact(double tau, double delta_tau, double baseline,
                     const RadarConfig& config) {
  const double r0 = radius_from_tau(tau, baseline, config);
  if (delta_tau == 0.0) return 0.0;
  return radius_from_tau(tau + delta_tau, baseline, config) - r0;
}

double delta_r_linear(double tau, double delta_tau, double baseline,
                      const RadarConfig& config) {
  const double rate = radius_rate(tau, baseline, config);
  if (delta_tau == 0.0) return 0.0;
  return rate * delta_tau;
}

RadiusUncertainty radius_uncertainty(double tau, double delta_tau,
                                     double baseline,
                                     const RadarConfig& config) {
  return {radius_from_tau(tau, baseline, config),
          delta_r_exact(tau, delta_tau, baseline, config),
          delta_r_linear(tau, delta_tau, baseline, config)};
}

}  // namespace mrd
