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

#ifndef MRD_UNCERTAINTY_HPP_
#define MRD_UNCERTAINTY_HPP_

#include "mrd/types.hpp"

namespace mrd {

// (t_j - t_i) - (t'_j - t'_i): measured minus ground-truth timestamp spread.
double timestamp_error(double measured_i, double measured_j, double truth_i,
                       double truth_j);

// r(tau, d, P) = d / sqrt(2 - 2 cos(4 pi tau / P)).
double radius_from_tau(double tau, double baseline, const RadarConfig& config);

// dr/dtau = -d (4 pi / P) sin(4 pi tau / P) / (2 - 2 cos(4 pi tau / P))^(3/2).
double radius_rate(double tau, double baseline, const RadarConfig& config);

// r(tau + delta_tau) - r(tau).
double delta_r_exact(double tau, double delta_tau, double baseline,
                     const RadarConfig& config);

// radius_rate(tau) * delta_tau.
double delta_r_linear(double tau, double delta_tau, double baseline,
                      const RadarConfig& config);

struct RadiusUncertainty {
  double r_nominal = 0.0;
  double delta_r_exact = 0.0;
  double delta_r_linear = 0.0;
};

RadiusUncertainty radius_uncertainty(double tau, double delta_tau,
                                     double baseline, const RadarConfig& config);

}  // namespace mrd

#endif  // MRD_UNCERTAINTY_HPP_
