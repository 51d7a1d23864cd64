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

#include "mrd/costopt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "mrd/verify.hpp"

namespace mrd {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBytesPerGb = 1e9;

bool rank_before(const SubsetResult& a, const SubsetResult& b) {
  if (a.expenditure != b.expenditure) return a.expenditure < b.expenditure;
  if (a.members.size() != b.members.size()) {
    return a.members.size() < b.members.size();
  }
  return a.ids < b.ids;
}

std::vector<std::string> ids_of(const SensorArray& sensors,
                                const std::vector<std::size_t>& members) {
  std::vector<std::string> ids;
  ids.reserve(members.size());
  for (std::size_t m : members) ids.push_back(sensors[m].id);
  return ids;
}

bool near(double a, double b) {
  return std::fabs(a - b) <= 1e-9 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace

std::vector<TariffBucket> default_tariff() {
  return {{100e6, 400, 80, 180}, {1e9, 700, 140, 350}, {5e9, 1750, 330, 875}};
}

std::int64_t tariff_cost_cents(double volume_bytes,
                               const std::vector<TariffBucket>& tariff) {
  if (tariff.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "tariff table is empty");
  }
  if (!(volume_bytes > 0.0)) return 0;
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const TariffBucket& b : tariff) {
    // Guard against 1e9 / 1e8 landing a hair above an integer.
    const double ratio = volume_bytes / b.volume_bytes;
    const double packages = std::ceil(ratio * (1.0 - 1e-12));
    best = std::min(best, static_cast<std::int64_t>(packages) * b.total_cents());
  }
  return best;
}

double CostParams::data_bytes_per_day_for(const std::string& sensor_id) const {
  auto it = sensor_data_bytes_per_day.find(sensor_id);
  return it == sensor_data_bytes_per_day.end() ? data_bytes_per_day : it->second;
}

void validate_cost_params(const CostParams& p) {
  auto check = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(name) + " must be a non-negative number");
    }
  };
  check(p.install_per_sensor, "install_per_sensor_eur");
  check(p.power_watts, "power_watts");
  check(p.energy_rate, "energy_rate_eur_per_kwh");
  check(p.data_rate, "data_rate_eur_per_gb");
  check(p.data_bytes_per_day, "data_bytes_per_day");
  check(p.horizon_days, "horizon_days");
  for (const auto& [id, v] : p.sensor_data_bytes_per_day) {
    check(v, "sensor_data_bytes_per_day");
  }
  if (!(p.timestep_hours > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "timestep_hours must be > 0");
  }
  for (const TariffBucket& b : p.tariff) {
    if (!(b.volume_bytes > 0.0) || b.package_cents < 0 || b.pooling_cents < 0 ||
        b.connectivity_cents < 0) {
      throw Error(ErrorCode::kInvalidArgument, "invalid tariff bucket");
    }
  }
  if (p.data_pricing == DataPricing::kTariff && p.tariff.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "tariff pricing needs a tariff table");
  }
}

CostParams parse_cost_params(const std::string& text, const std::string& source) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError,
                source + ": malformed JSON (" + e.what() + ")");
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::kParseError, source + ": top level must be an object");
  }
  CostParams p;
  auto number = [&](const char* key, double& target) {
    if (!doc.contains(key)) return;
    if (!doc.at(key).is_number()) {
      throw Error(ErrorCode::kParseError,
                  source + ": field '" + key + "' must be a number");
    }
    target = doc.at(key).get<double>();
  };
  number("install_per_sensor_eur", p.install_per_sensor);
  number("power_watts", p.power_watts);
  number("energy_rate_eur_per_kwh", p.energy_rate);
  number("data_rate_eur_per_gb", p.data_rate);
  number("data_bytes_per_day", p.data_bytes_per_day);
  number("horizon_days", p.horizon_days);
  number("timestep_hours", p.timestep_hours);
  try {
    if (doc.contains("data_pricing")) {
      const std::string mode = doc.at("data_pricing").get<std::string>();
      if (mode == "linear") {
        p.data_pricing = DataPricing::kLinear;
      } else if (mode == "tariff") {
        p.data_pricing = DataPricing::kTariff;
      } else {
        throw Error(ErrorCode::kParseError,
                    source + ": field 'data_pricing' must be 'linear' or 'tariff'");
      }
    }
    if (doc.contains("tariff")) {
      p.tariff.clear();
      for (const Json& b : doc.at("tariff")) {
        p.tariff.push_back({b.at("volume_bytes").get<double>(),
                            b.at("package_cents").get<std::int64_t>(),
                            b.value("pooling_cents", std::int64_t{0}),
                            b.value("connectivity_cents", std::int64_t{0})});
      }
    }
    if (doc.contains("sensor_data_bytes_per_day")) {
      for (const auto& [id, v] : doc.at("sensor_data_bytes_per_day").items()) {
        p.sensor_data_bytes_per_day[id] = v.get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, source + ": " + e.what());
  }
  try {
    validate_cost_params(p);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParseError, source + ": " + e.what());
  }
  return p;
}

CostParams load_cost_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, path + ": cannot open cost file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_cost_params(buf.str(), path);
}

std::string serialize_cost_params(const CostParams& p) {
  Json doc;
  doc["install_per_sensor_eur"] = p.install_per_sensor;
  doc["power_watts"] = p.power_watts;
  doc["energy_rate_eur_per_kwh"] = p.energy_rate;
  doc["data_rate_eur_per_gb"] = p.data_rate;
  doc["data_pricing"] = p.data_pricing == DataPricing::kLinear ? "linear" : "tariff";
  Json tariff = Json::array();
  for (const TariffBucket& b : p.tariff) {
    tariff.push_back({{"volume_bytes", b.volume_bytes},
                      {"package_cents", b.package_cents},
                      {"pooling_cents", b.pooling_cents},
                      {"connectivity_cents", b.connectivity_cents}});
  }
  doc["tariff"] = tariff;
  doc["data_bytes_per_day"] = p.data_bytes_per_day;
  Json overrides = Json::object();
  for (const auto& [id, v] : p.sensor_data_bytes_per_day) overrides[id] = v;
  doc["sensor_data_bytes_per_day"] = overrides;
  doc["horizon_days"] = p.horizon_days;
  doc["timestep_hours"] = p.timestep_hours;
  return doc.dump(2) + "\n";
}

SensorSchedule constant_schedule(const std::vector<std::string>& sensor_ids,
                                 const CostParams& params) {
  validate_cost_params(params);
  const double horizon_hours = params.horizon_days * 24.0;
  SensorSchedule s;
  s.sensor_ids = sensor_ids;
  s.timestep_hours = params.timestep_hours;
  s.timesteps = static_cast<std::size_t>(
      std::ceil(horizon_hours / params.timestep_hours * (1.0 - 1e-12)));
  const std::size_t cells = sensor_ids.size() * s.timesteps;
  s.op.assign(cells, 1);
  s.energy_wh.assign(cells, 0.0);
  s.data_bytes.assign(cells, 0.0);
  for (std::size_t n = 0; n < sensor_ids.size(); ++n) {
    const double per_day = params.data_bytes_per_day_for(sensor_ids[n]);
    for (std::size_t t = 0; t < s.timesteps; ++t) {
      const double start = static_cast<double>(t) * params.timestep_hours;
      const double hours = std::min(params.timestep_hours, horizon_hours - start);
      s.energy_wh[s.index(n, t)] = params.power_watts * hours;
      s.data_bytes[s.index(n, t)] = per_day * hours / 24.0;
    }
  }
  return s;
}

double installation_cost(std::size_t n_sensors, const CostParams& params) {
  return static_cast<double>(n_sensors) * params.install_per_sensor;
}

OperationBreakdown operation_breakdown(const SensorSchedule& schedule,
                                       const CostParams& params, std::size_t t) {
  if (t >= schedule.timesteps) {
    throw Error(ErrorCode::kInvalidArgument, "timestep outside the horizon");
  }
  OperationBreakdown b;
  for (std::size_t n = 0; n < schedule.sensor_ids.size(); ++n) {
    const std::size_t i = schedule.index(n, t);
    if (!schedule.op[i]) continue;
    b.energy_wh += schedule.energy_wh[i];
    b.data_bytes += schedule.data_bytes[i];
  }
  b.energy_eur = b.energy_wh / 1000.0 * params.energy_rate;
  b.data_eur = b.data_bytes / kBytesPerGb * params.data_rate;
  return b;
}

double operation_cost(const SensorSchedule& schedule, const CostParams& params,
                      std::size_t t) {
  return operation_breakdown(schedule, params, t).total_eur();
}

double total_expenditure(const SensorSchedule& schedule, const CostParams& params) {
  double energy_wh = 0.0;
  double linear_bytes = 0.0;
  std::int64_t tariff_cents = 0;
  for (std::size_t n = 0; n < schedule.sensor_ids.size(); ++n) {
    double sensor_bytes = 0.0;
    for (std::size_t t = 0; t < schedule.timesteps; ++t) {
      const std::size_t i = schedule.index(n, t);
      if (!schedule.op[i]) continue;
      energy_wh += schedule.energy_wh[i];
      sensor_bytes += schedule.data_bytes[i];
    }
    if (params.data_pricing == DataPricing::kTariff) {
      tariff_cents += tariff_cost_cents(sensor_bytes, params.tariff);
    } else {
      linear_bytes += sensor_bytes;
    }
  }
  const double data_eur = params.data_pricing == DataPricing::kTariff
                              ? static_cast<double>(tariff_cents) / 100.0
                              : linear_bytes / kBytesPerGb * params.data_rate;
  return energy_wh / 1000.0 * params.energy_rate + data_eur +
         installation_cost(schedule.sensor_ids.size(), params);
}

Threshold Threshold::for_regime(Regime regime) {
  switch (regime) {
    case Regime::kCoastal: return {10.0, regime};
    case Regime::kPort: return {1.0, regime};
    case Regime::kDocked: return {0.1, regime};
  }
  return {10.0, Regime::kCoastal};
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::kCoastal: return "coastal";
    case Regime::kPort: return "port";
    case Regime::kDocked: return "docked";
  }
  return "coastal";
}

Regime regime_from_string(std::string_view text) {
  if (text == "coastal") return Regime::kCoastal;
  if (text == "port") return Regime::kPort;
  if (text == "docked") return Regime::kDocked;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown regime '" + std::string(text) + "'");
}

std::string SubsetResult::joined_ids(char sep) const {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out.push_back(sep);
    out += ids[i];
  }
  return out;
}

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    // Rightmost position that can still advance.
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

OptimizeResult optimize_subset(const SensorArray& sensors,
                               const SubsetEvaluator& evaluator,
                               const CostParams& params, const Threshold& threshold,
                               std::size_t min_size, std::size_t max_size) {
  validate_sensors(sensors);
  validate_cost_params(params);
  const std::size_t n = sensors.size();
  if (n < 3) {
    throw Error(ErrorCode::kInsufficientObservations,
                "optimization needs at least 3 sensors");
  }
  if (!(threshold.omega > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "omega must be > 0");
  }
  max_size = std::min(max_size, n);
  if (min_size == 0 || min_size > max_size) {
    throw Error(ErrorCode::kInvalidArgument, "invalid subset size range");
  }

  OptimizeResult result;
  result.best_achievable_error = kInf;
  auto evaluate = [&](const std::vector<std::size_t>& members) {
    SubsetResult r;
    r.members = members;
    r.ids = ids_of(sensors, members);
    r.expenditure = total_expenditure(constant_schedule(r.ids, params), params);
    r.max_error = evaluator(members);
    r.feasible = r.max_error <= threshold.omega;
    result.best_achievable_error = std::min(result.best_achievable_error, r.max_error);
    result.evaluated.push_back(r);
    return r;
  };

  if (n <= kExhaustiveLimit) {
    result.mode = SearchMode::kExhaustive;
    for (std::size_t k = min_size; k <= max_size; ++k) {
      for (const auto& members : combinations(n, k)) evaluate(members);
    }
  } else {
    result.mode = SearchMode::kGreedy;
    // Best seed of the smallest size, then add whichever sensor lowers the
    // worst-case error most until feasible.
    std::vector<std::size_t> current;
    double current_error = kInf;
    auto better = [](const SubsetResult& a, double a_err, const SubsetResult& b,
                     double b_err) {
      if (a_err != b_err) return a_err < b_err;
      return rank_before(a, b);
    };
    std::optional<SubsetResult> seed;
    for (const auto& members : combinations(n, min_size)) {
      SubsetResult r = evaluate(members);
      if (!seed || better(r, r.max_error, *seed, seed->max_error)) seed = r;
    }
    current = seed->members;
    current_error = seed->max_error;
    while (current_error > threshold.omega && current.size() < max_size) {
      std::optional<SubsetResult> step;
      for (std::size_t s = 0; s < n; ++s) {
        if (std::find(current.begin(), current.end(), s) != current.end()) continue;
        std::vector<std::size_t> members = current;
        members.insert(std::upper_bound(members.begin(), members.end(), s), s);
        SubsetResult r = evaluate(members);
        if (!step || better(r, r.max_error, *step, step->max_error)) step = r;
      }
      current = step->members;
      current_error = step->max_error;
    }
  }

  for (const SubsetResult& r : result.evaluated) {
    if (r.feasible) result.ranked.push_back(r);
  }
  std::sort(result.ranked.begin(), result.ranked.end(), rank_before);
  result.feasible = !result.ranked.empty();
  return result;
}

SubsetEvaluator position_evaluator(const SensorArray& sensors,
                                   std::vector<Vec2> positions,
                                   const RadarConfig& config, double delta_tau,
                                   ErrorMetric metric) {
  return [sensors, positions = std::move(positions), config, delta_tau,
          metric](const std::vector<std::size_t>& subset) {
    double worst = 0.0;
    for (const Vec2& v : positions) {
      const auto e = evaluate_position(sensors, subset, v, config, delta_tau, metric);
      if (!e) return kInf;
      worst = std::max(worst, *e);
    }
    return worst;
  };
}

namespace {

double subset_sweep_error(const SensorArray& sensors, const Sweep& sweep,
                          const std::vector<std::string>& ids,
                          const RadarConfig& config, const NoiseModel& noise,
                          ErrorMetric metric) {
  std::vector<SweepObservation> obs;
  for (const SweepObservation& o : sweep.observations) {
    if (std::find(ids.begin(), ids.end(), o.sensor_id) != ids.end()) {
      obs.push_back(o);
    }
  }
  if (obs.size() < 3) return kInf;
  try {
    const double e =
        estimate_position(sensors, obs, config, noise).error(metric);
    return std::isfinite(e) ? e : kInf;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidArgument) throw;
    return kInf;
  }
}

}  // namespace

SubsetEvaluator observation_evaluator(const SensorArray& sensors,
                                      std::vector<Sweep> sweeps,
                                      const RadarConfig& config, ErrorMetric metric) {
  return [sensors, sweeps = std::move(sweeps), config,
          metric](const std::vector<std::size_t>& subset) {
    const std::vector<std::string> ids = ids_of(sensors, subset);
    double worst = 0.0;
    for (const Sweep& s : sweeps) {
      worst = std::max(worst, subset_sweep_error(sensors, s, ids, config,
                                                 NoiseModel::ground_truth(), metric));
    }
    return worst;
  };
}

CombinationReport best_combinations(const SensorArray& sensors, const Sweep& sweep,
                                    const RadarConfig& config, const NoiseModel& noise,
                                    std::size_t k, ErrorMetric metric) {
  CombinationReport rep;
  rep.sweep = sweep.index;
  rep.vessel_id = sweep.vessel_id;

  std::vector<std::string> observed;
  for (const Sensor& s : sensors) {
    for (const SweepObservation& o : sweep.observations) {
      if (o.sensor_id == s.id) {
        observed.push_back(s.id);
        break;
      }
    }
  }
  if (observed.size() < 3 || k < 3 || k > observed.size()) {
    throw Error(ErrorCode::kInsufficientObservations,
                "sweep " + std::to_string(sweep.index) + " of '" + sweep.vessel_id +
                    "' cannot form size-" + std::to_string(k) + " combinations");
  }
  rep.baseline_error =
      subset_sweep_error(sensors, sweep, observed, config, noise, metric);

  for (const auto& members : combinations(observed.size(), k)) {
    SubsetError se;
    for (std::size_t m : members) se.ids.push_back(observed[m]);
    se.error = subset_sweep_error(sensors, sweep, se.ids, config, noise, metric);
    rep.subsets.push_back(std::move(se));
  }
  rep.evaluated = rep.subsets.size();
  std::vector<SubsetError> sorted = rep.subsets;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SubsetError& a, const SubsetError& b) {
                     if (a.error != b.error) return a.error < b.error;
                     return a.ids < b.ids;
                   });
  rep.best = sorted.front();
  rep.second_best = sorted.size() > 1 ? sorted[1] : sorted.front();
  rep.worst = sorted.back();
  rep.all_flagged = std::isinf(sorted.front().error);
  return rep;
}

std::vector<CombinationReport> per_timestep_best_combination(
    const SensorArray& sensors, const std::vector<Sweep>& sweeps,
    const RadarConfig& config, const NoiseModel& noise, std::size_t k,
    ErrorMetric metric) {
  std::vector<CombinationReport> out;
  out.reserve(sweeps.size());
  for (const Sweep& s : sweeps) {
    out.push_back(best_combinations(sensors, s, config, noise, k, metric));
  }
  return out;
}

std::vector<EnergyRow> energy_table(double watts) {
  std::vector<EnergyRow> rows;
  for (auto [name, hours] : {std::pair{"daily", 24.0}, std::pair{"weekly", 168.0},
                             std::pair{"monthly", 720.0}}) {
    const double wh = watts * hours;
    rows.push_back({name, hours, wh, wh / 1000.0, watts * hours * 3600.0});
  }
  return rows;
}

std::vector<DataRow> data_table() {
  std::vector<DataRow> rows;
  for (auto [name, days] : {std::pair{"daily", 1.0}, std::pair{"weekly", 7.0},
                            std::pair{"monthly", 30.0}}) {
    rows.push_back({name, days, kMinimumBytesPerDay * days,
                    kAverageBytesPerDay * days,
                    kWorstCaseBitsPerSecond / 8.0 * 86400.0 * days});
  }
  return rows;
}

std::vector<ConsistencyCheck> check_reference_tables() {
  std::vector<ConsistencyCheck> out;
  auto add = [&](std::string item, double listed, double derived) {
    out.push_back({std::move(item), listed, derived, near(listed, derived)});
  };
  const auto energy = energy_table(9.0);
  const double listed_wh[] = {216.0, 1512.0, 6480.0};
  const double listed_kwh[] = {0.216, 1.512, 6.48};
  const double listed_joules[] = {32400.0, 226800.0, 972000.0};
  for (std::size_t i = 0; i < energy.size(); ++i) {
    add("energy " + energy[i].interval + " Wh at 9 W", listed_wh[i], energy[i].wh);
    add("energy " + energy[i].interval + " kWh at 9 W", listed_kwh[i], energy[i].kwh);
    add("energy " + energy[i].interval + " J at 9 W", listed_joules[i],
        energy[i].joules);
  }
  const auto data = data_table();
  const double listed_min[] = {15.64e6, 109.48e6, 469.2e6};
  const double listed_avg[] = {62.573e6, 438.011e6, 1.87719e9};
  const double listed_worst[] = {432e9, 3024e9, 13.16032e12};
  for (std::size_t i = 0; i < data.size(); ++i) {
    add("data " + data[i].interval + " minimum bytes", listed_min[i],
        data[i].minimum_bytes);
    add("data " + data[i].interval + " average bytes", listed_avg[i],
        data[i].average_bytes);
    add("data " + data[i].interval + " worst-case bytes at 4 Mbps",
        listed_worst[i], data[i].worst_bytes);
  }
  const auto tariff = default_tariff();
  const double listed_total[] = {6.60, 11.90, 29.55};
  for (std::size_t i = 0; i < tariff.size(); ++i) {
    add("tariff bucket " + std::to_string(i) + " total EUR", listed_total[i],
        static_cast<double>(tariff[i].total_cents()) / 100.0);
  }
  return out;
}

}  // namespace mrd
