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

#ifndef MRD_COSTOPT_HPP_
#define MRD_COSTOPT_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mrd/fusion.hpp"
#include "mrd/sim.hpp"
#include "mrd/types.hpp"

// Expenditure model for a sensor infrastructure (installation plus energy and
// data over a horizon) and the search for the cheapest sensor subset that
// keeps the positioning error under a threshold.

namespace mrd {

// One prepaid data package. Prices are integer euro cents so package totals
// are exact.
struct TariffBucket {
  double volume_bytes = 0.0;
  std::int64_t package_cents = 0;
  std::int64_t pooling_cents = 0;
  std::int64_t connectivity_cents = 0;

  std::int64_t total_cents() const {
    return package_cents + pooling_cents + connectivity_cents;
  }
};

// 100 MB / 1 GB / 5 GB IoT packages.
std::vector<TariffBucket> default_tariff();

// Cheapest cover of `volume_bytes` with whole packages of a single bucket.
std::int64_t tariff_cost_cents(double volume_bytes,
                               const std::vector<TariffBucket>& tariff);

enum class DataPricing { kLinear, kTariff };

struct CostParams {
  double install_per_sensor = 2000.0;   // EUR
  double power_watts = 9.0;             // per sensor while operational
  double energy_rate = 0.30;            // EUR per kWh
  double data_rate = 11.90;             // EUR per GB (linear pricing)
  DataPricing data_pricing = DataPricing::kLinear;
  std::vector<TariffBucket> tariff = default_tariff();
  double data_bytes_per_day = 62.573e6;  // average profile
  std::map<std::string, double> sensor_data_bytes_per_day;  // overrides
  double horizon_days = 30.0;
  double timestep_hours = 24.0;

  double data_bytes_per_day_for(const std::string& sensor_id) const;
};

// Throws kInvalidArgument for negative values.
void validate_cost_params(const CostParams& params);

CostParams parse_cost_params(const std::string& text,
                             const std::string& source = "<memory>");
CostParams load_cost_params(const std::string& path);
std::string serialize_cost_params(const CostParams& params);

// op, energy and data per (sensor, timestep). Rows follow the sensor order.
struct SensorSchedule {
  std::vector<std::string> sensor_ids;
  std::size_t timesteps = 0;
  double timestep_hours = 24.0;
  std::vector<std::uint8_t> op;       // 0/1
  std::vector<double> energy_wh;      // Wh per timestep
  std::vector<double> data_bytes;     // bytes per timestep

  std::size_t index(std::size_t sensor, std::size_t t) const {
    return sensor * timesteps + t;
  }
};

// Every listed sensor operational for the whole horizon.
SensorSchedule constant_schedule(const std::vector<std::string>& sensor_ids,
                                 const CostParams& params);

double installation_cost(std::size_t n_sensors, const CostParams& params);

struct OperationBreakdown {
  double energy_wh = 0.0;
  double data_bytes = 0.0;
  double energy_eur = 0.0;
  double data_eur = 0.0;  // linear pricing only

  double total_eur() const { return energy_eur + data_eur; }
};

OperationBreakdown operation_breakdown(const SensorSchedule& schedule,
                                       const CostParams& params, std::size_t t);
// Sum over sensors of op * (e * w1 + tr * w2) at timestep t.
double operation_cost(const SensorSchedule& schedule, const CostParams& params,
                      std::size_t t);

// Sum of operation costs over the schedule plus installation of every row.
// Under tariff pricing the data term is each sensor's horizon volume priced
// with tariff_cost_cents instead of the per-timestep linear rate.
double total_expenditure(const SensorSchedule& schedule, const CostParams& params);

enum class Regime { kCoastal, kPort, kDocked };

struct Threshold {
  double omega = 10.0;
  Regime regime = Regime::kCoastal;

  static Threshold for_regime(Regime regime);
};

std::string_view to_string(Regime regime);
Regime regime_from_string(std::string_view text);

struct SubsetResult {
  std::vector<std::size_t> members;  // ascending sensor indices
  std::vector<std::string> ids;
  double expenditure = 0.0;
  double max_error = 0.0;  // +inf when some position is unmeasurable
  bool feasible = false;

  std::string joined_ids(char sep = ';') const;
};

enum class SearchMode { kExhaustive, kGreedy };

struct OptimizeResult {
  std::vector<SubsetResult> ranked;     // feasible, cheapest first
  std::vector<SubsetResult> evaluated;  // everything examined, in search order
  bool feasible = false;
  double best_achievable_error = 0.0;
  SearchMode mode = SearchMode::kExhaustive;
};

// Worst-case error of a subset (ascending sensor indices) over the vessel
// positions the caller cares about.
using SubsetEvaluator =
    std::function<double(const std::vector<std::size_t>& subset)>;

inline constexpr std::size_t kExhaustiveLimit = 12;

// Minimizes expenditure subject to max error <= omega over subsets whose size
// lies in [min_size, max_size]. Exhaustive up to kExhaustiveLimit sensors,
// greedy forward selection above. Ties: cheaper, then fewer sensors, then
// lexicographic ids.
OptimizeResult optimize_subset(const SensorArray& sensors,
                               const SubsetEvaluator& evaluator,
                               const CostParams& params, const Threshold& threshold,
                               std::size_t min_size, std::size_t max_size);

// Reverse-mode evaluator over known vessel positions.
SubsetEvaluator position_evaluator(const SensorArray& sensors,
                                   std::vector<Vec2> positions,
                                   const RadarConfig& config, double delta_tau,
                                   ErrorMetric metric);

// Forward evaluator over recorded sweeps (observations restricted to the
// subset, ground-truth noise model).
SubsetEvaluator observation_evaluator(const SensorArray& sensors,
                                      std::vector<Sweep> sweeps,
                                      const RadarConfig& config, ErrorMetric metric);

// Lexicographic k-combinations of {0..n-1}.
std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k);

struct SubsetError {
  std::vector<std::string> ids;
  double error = 0.0;  // +inf when the subset cannot locate the vessel
};

struct CombinationReport {
  int sweep = 0;
  std::string vessel_id;
  double baseline_error = 0.0;  // all observed sensors
  SubsetError best;
  SubsetError second_best;
  SubsetError worst;
  std::size_t evaluated = 0;
  bool all_flagged = false;  // every subset failed to locate
  std::vector<SubsetError> subsets;
};

// Evaluates every size-k subset of the sensors observed in one sweep.
CombinationReport best_combinations(const SensorArray& sensors, const Sweep& sweep,
                                    const RadarConfig& config, const NoiseModel& noise,
                                    std::size_t k, ErrorMetric metric);

std::vector<CombinationReport> per_timestep_best_combination(
    const SensorArray& sensors, const std::vector<Sweep>& sweeps,
    const RadarConfig& config, const NoiseModel& noise, std::size_t k,
    ErrorMetric metric);

// Reference datasheet figures and their re-derivation.
struct EnergyRow {
  std::string interval;
  double hours = 0.0;
  double wh = 0.0;
  double kwh = 0.0;
  double joules = 0.0;  // derived from watts and seconds
};
std::vector<EnergyRow> energy_table(double watts);

struct DataRow {
  std::string interval;
  double days = 0.0;
  double minimum_bytes = 0.0;
  double average_bytes = 0.0;
  double worst_bytes = 0.0;  // derived from the worst-case bitrate
};
inline constexpr double kMinimumBytesPerDay = 15.64e6;
inline constexpr double kAverageBytesPerDay = 62.573e6;
inline constexpr double kWorstCaseBitsPerSecond = 4e6;
std::vector<DataRow> data_table();

struct ConsistencyCheck {
  std::string item;
  double listed = 0.0;
  double derived = 0.0;
  bool consistent = false;
};
// Compares the listed datasheet values with their derivation.
std::vector<ConsistencyCheck> check_reference_tables();

}  // namespace mrd

#endif  // MRD_COSTOPT_HPP_
