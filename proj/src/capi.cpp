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

#include "mrd/mrd.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "mrd/costopt.hpp"
#include "mrd/fusion.hpp"
#include "mrd/geometry.hpp"
#include "mrd/sim.hpp"
#include "mrd/types.hpp"
#include "mrd/uncertainty.hpp"
#include "mrd/verify.hpp"

struct mrd_scenario {
  mrd::Scenario value;
};

struct mrd_cost_params {
  mrd::CostParams value;
};

namespace {

thread_local std::string g_last_error;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

mrd_status to_status(mrd::ErrorCode code) {
  return static_cast<mrd_status>(static_cast<int>(code));
}

template <class F>
mrd_status guarded(F&& body) {
  try {
    body();
    return MRD_OK;
  } catch (const mrd::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MRD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MRD_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return MRD_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw mrd::Error(mrd::ErrorCode::kInvalidArgument, what);
}

mrd::Vec2 vec(mrd_point p) { return {p.x, p.y}; }
mrd_point point(mrd::Vec2 v) { return {v.x, v.y}; }

mrd::Circle circle(const mrd_circle& c) { return {vec(c.center), c.radius}; }

mrd::Covariance2 cov(const mrd_covariance& c) { return {c.sxx, c.sxy, c.syy}; }
mrd_covariance cov(const mrd::Covariance2& c) { return {c.sxx, c.sxy, c.syy}; }

mrd::ErrorMetric metric(mrd_metric m) {
  require(m == MRD_METRIC_VERBATIM || m == MRD_METRIC_RMS, "unknown metric");
  return m == MRD_METRIC_RMS ? mrd::ErrorMetric::kRms : mrd::ErrorMetric::kVerbatim;
}

mrd::RadarConfig radar_with_period(double period) {
  mrd::RadarConfig cfg;
  cfg.period = period;
  mrd::validate_radar(cfg);
  return cfg;
}

std::ofstream open_out(const char* path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) {
    throw mrd::Error(mrd::ErrorCode::kIoError,
                     std::string("cannot open '") + path + "' for writing");
  }
  return out;
}

void check_written(std::ofstream& out, const char* path) {
  out.flush();
  if (!out) {
    throw mrd::Error(mrd::ErrorCode::kIoError,
                     std::string("write to '") + path + "' failed");
  }
}

std::vector<mrd::Sweep> read_observations(const char* path) {
  std::ifstream in(path);
  if (!in) {
    throw mrd::Error(mrd::ErrorCode::kParseError,
                     std::string("cannot open '") + path + "'");
  }
  return mrd::read_observations_csv(in, path);
}

bool has_truth(const std::vector<mrd::SweepObservation>& obs) {
  for (const auto& o : obs) {
    if (!o.truth_timestamp) return false;
  }
  return true;
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ';';
    s += ids[i];
  }
  return s;
}

std::string fmt_error(double e) {
  return std::isfinite(e) ? mrd::format_double(e) : "inf";
}

}  // namespace

extern "C" {

const char* mrd_version(void) { return "1.0.0"; }

const char* mrd_status_name(mrd_status status) {
  switch (status) {
    case MRD_OK:
      return "ok";
    case MRD_ERR_BUFFER_TOO_SMALL:
      return "BufferTooSmall";
    case MRD_ERR_INTERNAL:
      return "Internal";
    default:
      break;
  }
  const int v = static_cast<int>(status);
  if (v >= 1 && v <= static_cast<int>(mrd::ErrorCode::kIoError)) {
    return mrd::error_code_name(static_cast<mrd::ErrorCode>(v)).data();
  }
  return "Unknown";
}

const char* mrd_last_error(void) { return g_last_error.c_str(); }

mrd_status mrd_angle_from_timestamps(double tau, double period, double* out_alpha) {
  return guarded([&] {
    require(out_alpha, "null output");
    *out_alpha = mrd::angle_from_timestamps(tau, radar_with_period(period));
  });
}

mrd_status mrd_circle_radius(double alpha, double baseline, double* out_radius) {
  return guarded([&] {
    require(out_radius, "null output");
    *out_radius = mrd::circle_radius(alpha, baseline);
  });
}

mrd_status mrd_circle_center(mrd_point si, mrd_point sj, double alpha,
                             mrd_rotation_sense sense, mrd_circle* out_circle) {
  return guarded([&] {
    require(out_circle, "null output");
    require(sense == MRD_CLOCKWISE || sense == MRD_COUNTERCLOCKWISE,
            "unknown rotation sense");
    const mrd::Circle c = mrd::circle_through(
        vec(si), vec(sj), alpha,
        sense == MRD_CLOCKWISE ? mrd::RotationSense::kClockwise
                               : mrd::RotationSense::kCounterclockwise);
    *out_circle = {point(c.center), c.radius};
  });
}

mrd_status mrd_circle_intersection(mrd_circle c1, mrd_circle c2, mrd_point shared,
                                   mrd_point* out_point) {
  return guarded([&] {
    require(out_point, "null output");
    *out_point = point(mrd::circle_intersection(circle(c1), circle(c2), vec(shared)));
  });
}

mrd_status mrd_reverse_angle(mrd_point v, mrd_point si, mrd_point sj,
                             double* out_alpha) {
  return guarded([&] {
    require(out_alpha, "null output");
    *out_alpha = mrd::reverse_angle(vec(v), vec(si), vec(sj));
  });
}

mrd_status mrd_delta_r_exact(double tau, double delta_tau, double baseline,
                             double period, double* out_delta_r) {
  return guarded([&] {
    require(out_delta_r, "null output");
    *out_delta_r =
        mrd::delta_r_exact(tau, delta_tau, baseline, radar_with_period(period));
  });
}

mrd_status mrd_delta_r_linear(double tau, double delta_tau, double baseline,
                              double period, double* out_delta_r) {
  return guarded([&] {
    require(out_delta_r, "null output");
    *out_delta_r =
        mrd::delta_r_linear(tau, delta_tau, baseline, radar_with_period(period));
  });
}

mrd_status mrd_ellipse_from_pair(mrd_circle c, double delta_r,
                                 mrd_point intersection, mrd_ellipse* out_ellipse) {
  return guarded([&] {
    require(out_ellipse, "null output");
    const mrd::ConfidenceEllipse e =
        mrd::ellipse_from_pair(circle(c), delta_r, vec(intersection));
    *out_ellipse = {point(e.center), e.semi_minor, e.semi_major, e.orientation};
  });
}

mrd_status mrd_covariance_from_ellipse(const mrd_ellipse* ellipse,
                                       mrd_covariance* out_cov) {
  return guarded([&] {
    require(ellipse && out_cov, "null argument");
    mrd::ConfidenceEllipse e;
    e.center = vec(ellipse->center);
    e.semi_minor = ellipse->semi_minor;
    e.semi_major = ellipse->semi_major;
    e.orientation = ellipse->orientation;
    *out_cov = cov(mrd::covariance_from_ellipse(e));
  });
}

mrd_status mrd_fuse_pairwise(const mrd_covariance* acc, const mrd_covariance* next,
                             mrd_covariance* out_cov) {
  return guarded([&] {
    require(acc && next && out_cov, "null argument");
    *out_cov = cov(mrd::fuse_pairwise(cov(*acc), cov(*next)));
  });
}

mrd_status mrd_error_value(const mrd_covariance* c, mrd_metric m, double* out_error) {
  return guarded([&] {
    require(c && out_error, "null argument");
    *out_error = mrd::error_metric(cov(*c), metric(m));
  });
}

mrd_status mrd_scenario_load(const char* path, mrd_scenario** out) {
  return guarded([&] {
    require(path && out, "null argument");
    auto* s = new mrd_scenario{mrd::load_scenario(path)};
    *out = s;
  });
}

mrd_status mrd_scenario_preset(const char* name, mrd_scenario** out) {
  return guarded([&] {
    require(name && out, "null argument");
    const std::string n = name;
    mrd::Scenario sc;
    if (n == "rhine") {
      sc = mrd::rhine_preset();
    } else if (n == "forggensee") {
      sc = mrd::forggensee_preset();
    } else if (n == "collinear") {
      sc = mrd::collinear_preset();
    } else {
      throw mrd::Error(mrd::ErrorCode::kInvalidArgument,
                       "unknown preset '" + n + "'");
    }
    *out = new mrd_scenario{std::move(sc)};
  });
}

mrd_status mrd_scenario_save(const mrd_scenario* scenario, const char* path) {
  return guarded([&] {
    require(scenario && path, "null argument");
    mrd::save_scenario(scenario->value, path);
  });
}

void mrd_scenario_free(mrd_scenario* scenario) { delete scenario; }

mrd_status mrd_scenario_set_seed(mrd_scenario* scenario, uint64_t seed) {
  return guarded([&] {
    require(scenario, "null scenario");
    scenario->value.seed = seed;
  });
}

mrd_status mrd_scenario_set_noise_sigma_tau(mrd_scenario* scenario, double sigma) {
  return guarded([&] {
    require(scenario, "null scenario");
    require(std::isfinite(sigma) && sigma >= 0.0, "noise sigma must be >= 0");
    scenario->value.noise_sigma_tau = sigma;
  });
}

mrd_status mrd_scenario_sensor_count(const mrd_scenario* scenario,
                                     size_t* out_count) {
  return guarded([&] {
    require(scenario && out_count, "null argument");
    *out_count = scenario->value.sensors.size();
  });
}

mrd_status mrd_scenario_period(const mrd_scenario* scenario, double* out_period) {
  return guarded([&] {
    require(scenario && out_period, "null argument");
    *out_period = scenario->value.radar.period;
  });
}

mrd_status mrd_simulate(const mrd_scenario* scenario, const char* observations_csv,
                        const char* truth_csv, mrd_simulate_summary* out_summary) {
  return guarded([&] {
    require(scenario, "null scenario");
    const std::vector<mrd::Sweep> sweeps = mrd::simulate(scenario->value);
    if (observations_csv) {
      std::ofstream out = open_out(observations_csv);
      mrd::write_observations_csv(sweeps, out);
      check_written(out, observations_csv);
    }
    if (truth_csv) {
      std::ofstream out = open_out(truth_csv);
      mrd::write_truth_csv(sweeps, out);
      check_written(out, truth_csv);
    }
    if (out_summary) {
      out_summary->sweeps = sweeps.size();
      std::size_t n = 0;
      for (const auto& s : sweeps) n += s.observations.size();
      out_summary->observations = n;
    }
  });
}

mrd_status mrd_locate(const mrd_scenario* scenario,
                      const mrd_locate_options* options, const char* out_csv,
                      mrd_locate_summary* out_summary) {
  return guarded([&] {
    require(scenario && out_csv, "null argument");
    mrd_locate_options opt{nullptr, MRD_METRIC_VERBATIM, 0, 0};
    if (options) opt = *options;
    require(opt.combinations >= 0, "combinations must be >= 0");
    const mrd::Scenario& sc = scenario->value;
    const mrd::ErrorMetric m = metric(opt.metric);
    const bool from_file = opt.observations_csv != nullptr;
    const std::vector<mrd::Sweep> sweeps =
        from_file ? read_observations(opt.observations_csv) : mrd::simulate(sc);
    const mrd::PairingMode pairing =
        opt.all_pairs ? mrd::PairingMode::kAllPairs : mrd::PairingMode::kConsecutive;

    mrd_locate_summary summary{0, 0, 0, 0.0, from_file ? kNaN : 0.0};
    std::ofstream out = open_out(out_csv);
    out << "sweep,vessel,x,y,error,subset";
    if (opt.combinations > 0) {
      out << ",best_subset,best_error,second_subset,second_error,subsets_evaluated";
    }
    out << '\n';

    for (const mrd::Sweep& sw : sweeps) {
      const mrd::NoiseModel noise = has_truth(sw.observations)
                                        ? mrd::NoiseModel::ground_truth()
                                        : mrd::NoiseModel::constant(sc.noise_sigma_tau);
      std::vector<std::string> observed;
      for (const auto& o : sw.observations) observed.push_back(o.sensor_id);

      out << sw.index << ',' << sw.vessel_id << ',';
      ++summary.rows;
      try {
        const mrd::PositionEstimate est = mrd::estimate_position(
            sc.sensors, sw.observations, sc.radar, noise, pairing);
        const double e = est.error(m);
        out << mrd::format_double(est.point.x) << ','
            << mrd::format_double(est.point.y) << ',' << fmt_error(e);
        if (std::isfinite(e)) summary.max_error = std::max(summary.max_error, e);
        if (!from_file) {
          summary.max_position_error = std::max(
              summary.max_position_error, mrd::distance(est.point, sw.truth_position));
        }
      } catch (const mrd::Error&) {
        ++summary.failed_rows;
        out << "nan,nan,inf";
      }
      out << ',' << join_ids(observed);

      if (opt.combinations > 0) {
        const auto k = static_cast<std::size_t>(opt.combinations);
        if (k > observed.size()) {
          out << ",,inf,,inf,0";
        } else {
          const mrd::CombinationReport rep =
              mrd::best_combinations(sc.sensors, sw, sc.radar, noise, k, m);
          summary.subsets_per_row = rep.evaluated;
          out << ',' << join_ids(rep.best.ids) << ',' << fmt_error(rep.best.error)
              << ',' << join_ids(rep.second_best.ids) << ','
              << fmt_error(rep.second_best.error) << ',' << rep.evaluated;
        }
      }
      out << '\n';
    }
    check_written(out, out_csv);
    if (out_summary) *out_summary = summary;
  });
}

void mrd_heatmap_options_init(mrd_heatmap_options* options) {
  if (!options) return;
  options->cells_x = 0;
  options->cells_y = 0;
  options->margin = -1;
  options->delta_tau = -1.0;
  options->metric = MRD_METRIC_VERBATIM;
  options->format = MRD_FORMAT_CSV;
  options->legend_max = 5.0;
  options->threads = 0;
}

mrd_status mrd_heatmap(const mrd_scenario* scenario,
                       const mrd_heatmap_options* options, const char* out_path,
                       mrd_heatmap_summary* out_summary) {
  return guarded([&] {
    require(scenario, "null scenario");
    mrd_heatmap_options opt;
    mrd_heatmap_options_init(&opt);
    if (options) opt = *options;
    require(opt.format == MRD_FORMAT_CSV || opt.format == MRD_FORMAT_PGM,
            "unknown heatmap format");
    const mrd::Scenario& sc = scenario->value;
    const mrd::GridSpec spec = sc.grid.value_or(mrd::GridSpec{});
    const int cx = opt.cells_x > 0 ? opt.cells_x : spec.cells_x;
    const int cy = opt.cells_y > 0 ? opt.cells_y : spec.cells_y;
    const int margin = opt.margin >= 0 ? opt.margin : spec.margin;
    const double legend = opt.legend_max > 0.0 ? opt.legend_max : 5.0;

    mrd::HeatmapOptions hopt;
    hopt.delta_tau = opt.delta_tau >= 0.0 ? opt.delta_tau : sc.noise_sigma_tau;
    hopt.metric = metric(opt.metric);
    hopt.threads = opt.threads;

    const mrd::RegionGrid grid = mrd::build_grid(sc.sensors, cx, cy, margin);
    const mrd::Heatmap map = mrd::heatmap(sc.sensors, grid, sc.radar, hopt);

    if (out_path) {
      const bool pgm = opt.format == MRD_FORMAT_PGM;
      std::ofstream out = open_out(out_path, pgm);
      if (pgm) {
        mrd::export_heatmap_pgm(map, legend, out);
      } else {
        mrd::export_heatmap_csv(map, out);
      }
      check_written(out, out_path);
    }
    if (out_summary) {
      const mrd::HeatmapStats st = mrd::heatmap_stats(map, legend);
      out_summary->cells_x = static_cast<size_t>(grid.cells_x);
      out_summary->cells_y = static_cast<size_t>(grid.cells_y);
      out_summary->cells = st.cells;
      out_summary->unmeasurable = st.unmeasurable;
      out_summary->below_legend = st.below_legend;
      out_summary->median = st.median;
      out_summary->max = st.max;
      out_summary->cell_width = grid.cell_width();
      out_summary->cell_height = grid.cell_height();
    }
  });
}

mrd_status mrd_cost_params_default(mrd_cost_params** out) {
  return guarded([&] {
    require(out, "null output");
    *out = new mrd_cost_params{};
  });
}

mrd_status mrd_cost_params_load(const char* path, mrd_cost_params** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new mrd_cost_params{mrd::load_cost_params(path)};
  });
}

void mrd_cost_params_free(mrd_cost_params* params) { delete params; }

mrd_status mrd_cost_params_set(mrd_cost_params* params, const char* key,
                               double value) {
  return guarded([&] {
    require(params && key, "null argument");
    mrd::CostParams p = params->value;
    const std::string k = key;
    if (k == "install_per_sensor_eur") {
      p.install_per_sensor = value;
    } else if (k == "power_watts") {
      p.power_watts = value;
    } else if (k == "energy_rate_eur_per_kwh") {
      p.energy_rate = value;
    } else if (k == "data_rate_eur_per_gb") {
      p.data_rate = value;
    } else if (k == "data_bytes_per_day") {
      p.data_bytes_per_day = value;
    } else if (k == "horizon_days") {
      p.horizon_days = value;
    } else if (k == "timestep_hours") {
      p.timestep_hours = value;
    } else {
      throw mrd::Error(mrd::ErrorCode::kInvalidArgument,
                       "unknown cost parameter '" + k + "'");
    }
    require(std::isfinite(value), "cost parameter must be finite");
    mrd::validate_cost_params(p);
    params->value = std::move(p);
  });
}

mrd_status mrd_cost_params_set_pricing(mrd_cost_params* params, const char* mode) {
  return guarded([&] {
    require(params && mode, "null argument");
    const std::string m = mode;
    if (m == "linear") {
      params->value.data_pricing = mrd::DataPricing::kLinear;
    } else if (m == "tariff") {
      params->value.data_pricing = mrd::DataPricing::kTariff;
    } else {
      throw mrd::Error(mrd::ErrorCode::kInvalidArgument,
                       "unknown data pricing '" + m + "'");
    }
  });
}

mrd_status mrd_installation_cost(size_t n_sensors, const mrd_cost_params* params,
                                 double* out_eur) {
  return guarded([&] {
    require(params && out_eur, "null argument");
    *out_eur = mrd::installation_cost(n_sensors, params->value);
  });
}

mrd_status mrd_total_expenditure(size_t n_sensors, const mrd_cost_params* params,
                                 double* out_eur) {
  return guarded([&] {
    require(params && out_eur, "null argument");
    std::vector<std::string> ids;
    for (size_t i = 0; i < n_sensors; ++i) ids.push_back("S" + std::to_string(i + 1));
    *out_eur = mrd::total_expenditure(mrd::constant_schedule(ids, params->value),
                                      params->value);
  });
}

mrd_status mrd_threshold_for_regime(const char* regime, double* out_omega) {
  return guarded([&] {
    require(regime && out_omega, "null argument");
    *out_omega = mrd::Threshold::for_regime(mrd::regime_from_string(regime)).omega;
  });
}

mrd_status mrd_cost_report(const mrd_cost_params* params, size_t n_sensors,
                           char* buffer, size_t capacity, size_t* out_required) {
  std::string text;
  const mrd_status st = guarded([&] {
    require(params, "null params");
    const mrd::CostParams& p = params->value;
    mrd::validate_cost_params(p);
    std::ostringstream os;
    auto num = [](double v) {
      std::ostringstream s;
      s.precision(10);
      s << v;
      return s.str();
    };
    auto eur = [](double v) {
      char b[64];
      std::snprintf(b, sizeof b, "%.2f EUR", v);
      return std::string(b);
    };

    std::vector<std::string> ids;
    for (size_t i = 0; i < n_sensors; ++i) ids.push_back("S" + std::to_string(i + 1));
    const mrd::SensorSchedule sched = mrd::constant_schedule(ids, p);
    double wh = 0.0;
    double bytes = 0.0;
    for (std::size_t t = 0; t < sched.timesteps; ++t) {
      const mrd::OperationBreakdown b = mrd::operation_breakdown(sched, p, t);
      wh += b.energy_wh;
      bytes += b.data_bytes;
    }
    const double per_sensor_wh = n_sensors ? wh / n_sensors : 0.0;

    os << "sensors: " << n_sensors << "\n";
    os << "horizon: " << num(p.horizon_days) << " days in " << sched.timesteps
       << " timesteps of " << num(p.timestep_hours) << " h\n";
    os << "energy per sensor: " << num(per_sensor_wh) << " Wh ("
       << num(per_sensor_wh / 1000.0) << " kWh) at " << num(p.power_watts) << " W\n";
    os << "energy total: " << num(wh / 1000.0) << " kWh, "
       << eur(wh / 1000.0 * p.energy_rate) << " at " << num(p.energy_rate)
       << " EUR/kWh\n";
    os << "data total: " << num(bytes / 1e9) << " GB";
    if (p.data_pricing == mrd::DataPricing::kLinear) {
      os << ", " << eur(bytes / 1e9 * p.data_rate) << " at " << num(p.data_rate)
         << " EUR/GB\n";
    } else {
      std::int64_t cents = 0;
      for (const std::string& id : ids) {
        cents += mrd::tariff_cost_cents(p.data_bytes_per_day_for(id) * p.horizon_days,
                                        p.tariff);
      }
      os << ", " << eur(static_cast<double>(cents) / 100.0) << " by tariff\n";
    }
    os << "installation: " << eur(mrd::installation_cost(n_sensors, p)) << "\n";
    os << "expenditure: " << eur(mrd::total_expenditure(sched, p)) << "\n";

    os << "\nenergy reference at " << num(p.power_watts) << " W\n";
    for (const mrd::EnergyRow& r : mrd::energy_table(p.power_watts)) {
      os << "  " << r.interval << ": " << num(r.wh) << " Wh, " << num(r.kwh)
         << " kWh, " << num(r.joules) << " J\n";
    }
    os << "data reference\n";
    for (const mrd::DataRow& r : mrd::data_table()) {
      os << "  " << r.interval << ": min " << num(r.minimum_bytes / 1e9) << " GB, avg "
         << num(r.average_bytes / 1e9) << " GB, worst " << num(r.worst_bytes / 1e9)
         << " GB\n";
    }
    os << "tariff packages\n";
    for (const mrd::TariffBucket& b : p.tariff) {
      os << "  " << num(b.volume_bytes / 1e6) << " MB: "
         << eur(static_cast<double>(b.total_cents()) / 100.0) << "\n";
    }
    os << "datasheet checks\n";
    for (const mrd::ConsistencyCheck& c : mrd::check_reference_tables()) {
      os << "  " << c.item << ": listed " << num(c.listed) << ", derived "
         << num(c.derived) << (c.consistent ? " ok" : " MISMATCH") << "\n";
    }
    text = os.str();
  });
  if (st != MRD_OK) return st;
  if (out_required) *out_required = text.size() + 1;
  if (!buffer || capacity < text.size() + 1) {
    g_last_error = "buffer too small";
    return MRD_ERR_BUFFER_TOO_SMALL;
  }
  std::memcpy(buffer, text.c_str(), text.size() + 1);
  return MRD_OK;
}

mrd_status mrd_optimize(const mrd_scenario* scenario, const mrd_cost_params* params,
                        const mrd_optimize_options* options, const char* out_csv,
                        mrd_optimize_summary* out_summary) {
  bool infeasible = false;
  const mrd_status st = guarded([&] {
    require(scenario && params, "null argument");
    mrd_optimize_options opt{0.0, nullptr, MRD_METRIC_VERBATIM, 0, 0, 0};
    if (options) opt = *options;
    const mrd::Scenario& sc = scenario->value;
    const mrd::ErrorMetric m = metric(opt.metric);

    mrd::Threshold threshold = mrd::Threshold::for_regime(
        opt.regime ? mrd::regime_from_string(opt.regime) : mrd::Regime::kCoastal);
    if (opt.omega > 0.0) threshold.omega = opt.omega;
    const std::size_t n = sc.sensors.size();
    const std::size_t min_size = opt.min_size ? opt.min_size : 3;
    const std::size_t max_size = opt.max_size ? opt.max_size : n;

    const std::vector<mrd::Sweep> sweeps = mrd::simulate(sc);
    mrd::SubsetEvaluator eval;
    if (opt.use_positions) {
      std::vector<mrd::Vec2> positions;
      for (const auto& s : sweeps) positions.push_back(s.truth_position);
      eval = mrd::position_evaluator(sc.sensors, std::move(positions), sc.radar,
                                     sc.noise_sigma_tau, m);
    } else {
      eval = mrd::observation_evaluator(sc.sensors, sweeps, sc.radar, m);
    }
    const mrd::OptimizeResult res = mrd::optimize_subset(
        sc.sensors, eval, params->value, threshold, min_size, max_size);

    if (out_csv) {
      std::ofstream out = open_out(out_csv);
      out << "subset_ids,expenditure_eur,max_error,feasible\n";
      auto row = [&](const mrd::SubsetResult& r) {
        out << r.joined_ids(';') << ',' << mrd::format_double(r.expenditure) << ','
            << fmt_error(r.max_error) << ',' << (r.feasible ? 1 : 0) << '\n';
      };
      for (const auto& r : res.ranked) row(r);
      for (const auto& r : res.evaluated) {
        if (!r.feasible) row(r);
      }
      check_written(out, out_csv);
    }
    if (out_summary) {
      mrd_optimize_summary s{};
      s.feasible = res.feasible ? 1 : 0;
      s.greedy = res.mode == mrd::SearchMode::kGreedy ? 1 : 0;
      s.evaluated = res.evaluated.size();
      s.feasible_count = res.ranked.size();
      s.omega = threshold.omega;
      s.best_expenditure = res.feasible ? res.ranked.front().expenditure : kNaN;
      s.best_achievable_error = res.best_achievable_error;
      if (res.feasible) {
        const std::string ids = res.ranked.front().joined_ids(';');
        std::snprintf(s.best_subset, sizeof s.best_subset, "%s", ids.c_str());
      }
      *out_summary = s;
    }
    infeasible = !res.feasible;
  });
  if (st != MRD_OK) return st;
  if (infeasible) {
    g_last_error = "no sensor subset meets the error threshold";
    return MRD_ERR_INFEASIBLE;
  }
  return MRD_OK;
}

}  // extern "C"
