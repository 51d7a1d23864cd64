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

/*
 * C interface to the MRD positioning library.
 *
 * Every function returns an mrd_status; on failure a message for the calling
 * thread is available from mrd_last_error() until the next failing call.
 * Handles are opaque and owned by the caller, who releases them with the
 * matching *_free function. Output pointers are written only on success.
 */
#ifndef MRD_MRD_H_
#define MRD_MRD_H_

#include <stddef.h>
#include <stdint.h>

#if defined(MRD_BUILDING_LIBRARY)
#define MRD_API __attribute__((visibility("default")))
#else
#define MRD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mrd_status {
  MRD_OK = 0,
  MRD_ERR_INVALID_ARGUMENT = 1,
  MRD_ERR_DEGENERATE_TIMING = 2,
  MRD_ERR_COLLINEAR_DEGENERACY = 3,
  MRD_ERR_COINCIDENT_SENSORS = 4,
  MRD_ERR_DISJOINT_CIRCLES = 5,
  MRD_ERR_AMBIGUOUS_INTERSECTION = 6,
  MRD_ERR_DEGENERATE_VERTEX = 7,
  MRD_ERR_NUMERICAL_DOMAIN = 8,
  MRD_ERR_DEGENERATE_ORIENTATION = 9,
  MRD_ERR_SINGULAR_FUSION = 10,
  MRD_ERR_INSUFFICIENT_OBSERVATIONS = 11,
  MRD_ERR_DEGENERATE_GEOMETRY = 12,
  MRD_ERR_DEGENERATE_REGION = 13,
  MRD_ERR_INFEASIBLE = 14,
  MRD_ERR_PARSE = 15,
  MRD_ERR_IO = 16,
  MRD_ERR_BUFFER_TOO_SMALL = 17,
  MRD_ERR_INTERNAL = 99
} mrd_status;

typedef enum mrd_rotation_sense {
  MRD_CLOCKWISE = 0,
  MRD_COUNTERCLOCKWISE = 1
} mrd_rotation_sense;

typedef enum mrd_metric {
  MRD_METRIC_VERBATIM = 0, /* sqrt(sxx^2 + syy^2) */
  MRD_METRIC_RMS = 1       /* sqrt(sxx + syy), meters */
} mrd_metric;

typedef enum mrd_format { MRD_FORMAT_CSV = 0, MRD_FORMAT_PGM = 1 } mrd_format;

typedef struct mrd_point {
  double x;
  double y;
} mrd_point;

typedef struct mrd_circle {
  mrd_point center;
  double radius;
} mrd_circle;

typedef struct mrd_ellipse {
  mrd_point center;
  double semi_minor;
  double semi_major;
  double orientation;
} mrd_ellipse;

typedef struct mrd_covariance {
  double sxx;
  double sxy;
  double syy;
} mrd_covariance;

typedef struct mrd_scenario mrd_scenario;
typedef struct mrd_cost_params mrd_cost_params;

MRD_API const char* mrd_version(void);
MRD_API const char* mrd_status_name(mrd_status status);
MRD_API const char* mrd_last_error(void);

/* ---- geometry and uncertainty primitives ---- */

MRD_API mrd_status mrd_angle_from_timestamps(double tau, double period,
                                             double* out_alpha);
MRD_API mrd_status mrd_circle_radius(double alpha, double baseline,
                                     double* out_radius);
MRD_API mrd_status mrd_circle_center(mrd_point si, mrd_point sj, double alpha,
                                     mrd_rotation_sense sense,
                                     mrd_circle* out_circle);
MRD_API mrd_status mrd_circle_intersection(mrd_circle c1, mrd_circle c2,
                                           mrd_point shared,
                                           mrd_point* out_point);
MRD_API mrd_status mrd_reverse_angle(mrd_point v, mrd_point si, mrd_point sj,
                                     double* out_alpha);
MRD_API mrd_status mrd_delta_r_exact(double tau, double delta_tau,
                                     double baseline, double period,
                                     double* out_delta_r);
MRD_API mrd_status mrd_delta_r_linear(double tau, double delta_tau,
                                      double baseline, double period,
                                      double* out_delta_r);

/* ---- ellipse fusion ---- */

MRD_API mrd_status mrd_ellipse_from_pair(mrd_circle circle, double delta_r,
                                         mrd_point intersection,
                                         mrd_ellipse* out_ellipse);
MRD_API mrd_status mrd_covariance_from_ellipse(const mrd_ellipse* ellipse,
                                               mrd_covariance* out_cov);
MRD_API mrd_status mrd_fuse_pairwise(const mrd_covariance* acc,
                                     const mrd_covariance* next,
                                     mrd_covariance* out_cov);
MRD_API mrd_status mrd_error_value(const mrd_covariance* cov, mrd_metric metric,
                                   double* out_error);

/* ---- scenarios ---- */

MRD_API mrd_status mrd_scenario_load(const char* path, mrd_scenario** out);
/* name: "rhine", "forggensee" or "collinear" */
MRD_API mrd_status mrd_scenario_preset(const char* name, mrd_scenario** out);
MRD_API mrd_status mrd_scenario_save(const mrd_scenario* scenario,
                                     const char* path);
MRD_API void mrd_scenario_free(mrd_scenario* scenario);
MRD_API mrd_status mrd_scenario_set_seed(mrd_scenario* scenario, uint64_t seed);
MRD_API mrd_status mrd_scenario_set_noise_sigma_tau(mrd_scenario* scenario,
                                                    double sigma);
MRD_API mrd_status mrd_scenario_sensor_count(const mrd_scenario* scenario,
                                             size_t* out_count);
MRD_API mrd_status mrd_scenario_period(const mrd_scenario* scenario,
                                       double* out_period);

/* ---- simulate ---- */

typedef struct mrd_simulate_summary {
  size_t sweeps;       /* (sweep, vessel) rows in the truth file */
  size_t observations; /* rows in the observation file */
} mrd_simulate_summary;

/* Writes `sweep,vessel,sensor,timestamp,truth_timestamp` and
 * `sweep,vessel,time,x,y`. Either path may be NULL. */
MRD_API mrd_status mrd_simulate(const mrd_scenario* scenario,
                                const char* observations_csv,
                                const char* truth_csv,
                                mrd_simulate_summary* out_summary);

/* ---- locate ---- */

typedef struct mrd_locate_options {
  const char* observations_csv; /* NULL: simulate from the scenario */
  mrd_metric metric;
  int combinations; /* k > 0 adds best / second-best size-k subsets */
  int all_pairs;    /* nonzero: all sensor pairs instead of consecutive */
} mrd_locate_options;

typedef struct mrd_locate_summary {
  size_t rows;
  size_t failed_rows;        /* rows written with error=inf */
  size_t subsets_per_row;    /* C(n, k) when combinations > 0 */
  double max_error;          /* over rows that located */
  double max_position_error; /* meters vs ground truth; NaN if unknown */
} mrd_locate_summary;

/* Writes `sweep,vessel,x,y,error,subset` (+ `best_subset,best_error,
 * second_subset,second_error,subsets_evaluated` with combinations). */
MRD_API mrd_status mrd_locate(const mrd_scenario* scenario,
                              const mrd_locate_options* options,
                              const char* out_csv,
                              mrd_locate_summary* out_summary);

/* ---- heatmap ---- */

typedef struct mrd_heatmap_options {
  int cells_x;       /* <= 0: scenario grid, else 200 */
  int cells_y;       /* <= 0: scenario grid, else 200 */
  int margin;        /* < 0: scenario grid, else 0 */
  double delta_tau;  /* < 0: scenario noise_sigma_tau */
  mrd_metric metric;
  mrd_format format;
  double legend_max; /* <= 0: 5 */
  unsigned threads;  /* 0: hardware concurrency */
} mrd_heatmap_options;

typedef struct mrd_heatmap_summary {
  size_t cells_x;
  size_t cells_y;
  size_t cells;
  size_t unmeasurable;
  size_t below_legend;
  double median;
  double max;
  double cell_width;
  double cell_height;
} mrd_heatmap_summary;

MRD_API void mrd_heatmap_options_init(mrd_heatmap_options* options);
MRD_API mrd_status mrd_heatmap(const mrd_scenario* scenario,
                               const mrd_heatmap_options* options,
                               const char* out_path,
                               mrd_heatmap_summary* out_summary);

/* ---- cost model ---- */

MRD_API mrd_status mrd_cost_params_default(mrd_cost_params** out);
MRD_API mrd_status mrd_cost_params_load(const char* path, mrd_cost_params** out);
MRD_API void mrd_cost_params_free(mrd_cost_params* params);
/* key: install_per_sensor_eur, power_watts, energy_rate_eur_per_kwh,
 * data_rate_eur_per_gb, data_bytes_per_day, horizon_days, timestep_hours */
MRD_API mrd_status mrd_cost_params_set(mrd_cost_params* params, const char* key,
                                       double value);
/* mode: "linear" or "tariff" */
MRD_API mrd_status mrd_cost_params_set_pricing(mrd_cost_params* params,
                                               const char* mode);
MRD_API mrd_status mrd_installation_cost(size_t n_sensors,
                                         const mrd_cost_params* params,
                                         double* out_eur);
MRD_API mrd_status mrd_total_expenditure(size_t n_sensors,
                                         const mrd_cost_params* params,
                                         double* out_eur);
MRD_API mrd_status mrd_threshold_for_regime(const char* regime,
                                            double* out_omega);

/* Plain-text breakdown (energy, data, tariff, horizon totals, datasheet
 * consistency). With a NULL or short buffer, *out_required receives the
 * needed size including the terminator and MRD_ERR_BUFFER_TOO_SMALL is
 * returned. */
MRD_API mrd_status mrd_cost_report(const mrd_cost_params* params,
                                   size_t n_sensors, char* buffer,
                                   size_t capacity, size_t* out_required);

/* ---- optimize ---- */

typedef struct mrd_optimize_options {
  double omega;       /* <= 0: use regime */
  const char* regime; /* coastal | port | docked; NULL: coastal */
  mrd_metric metric;
  size_t min_size;    /* 0: 3 */
  size_t max_size;    /* 0: all sensors */
  int use_positions;  /* nonzero: reverse mode at ground-truth positions */
} mrd_optimize_options;

typedef struct mrd_optimize_summary {
  int feasible;
  int greedy;
  size_t evaluated;
  size_t feasible_count;
  double omega;
  double best_expenditure;      /* NaN when infeasible */
  double best_achievable_error; /* min over subsets of the worst-case error */
  char best_subset[256];        /* ';'-joined ids, empty when infeasible */
} mrd_optimize_summary;

/* Writes `subset_ids,expenditure_eur,max_error,feasible`, feasible subsets
 * first in rank order. Returns MRD_ERR_INFEASIBLE (after writing the file and
 * summary) when no subset meets omega. */
MRD_API mrd_status mrd_optimize(const mrd_scenario* scenario,
                                const mrd_cost_params* params,
                                const mrd_optimize_options* options,
                                const char* out_csv,
                                mrd_optimize_summary* out_summary);

#ifdef __cplusplus
}
#endif

#endif /* MRD_MRD_H_ */
