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

// mrd: command-line front end over the MRD C library.
//
//   mrd simulate --preset rhine --out run/
//   mrd locate   --scenario scenarios/rhine.json --out run/ --combinations 3
//   mrd heatmap  --preset collinear --out run/ --format pgm
//   mrd optimize --preset rhine --out run/ --regime port
//   mrd cost     --watts 9 --days 30
//
// Exit status: 0 success, 1 internal failure, 2 bad input (arguments, parse
// or I/O errors), 3 degenerate geometry, 4 no sensor subset meets the
// threshold.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mrd/mrd.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

bool g_verbose = false;

void log_line(const std::string& msg) {
  if (g_verbose) std::cerr << "[mrd] " << msg << '\n';
}

int exit_code(mrd_status st) {
  switch (st) {
    case MRD_OK:
      return 0;
    case MRD_ERR_INFEASIBLE:
      return 4;
    case MRD_ERR_INVALID_ARGUMENT:
    case MRD_ERR_PARSE:
    case MRD_ERR_IO:
      return 2;
    case MRD_ERR_INTERNAL:
    case MRD_ERR_BUFFER_TOO_SMALL:
      return 1;
    default:
      return 3;
  }
}

int fail(mrd_status st) {
  std::cerr << "mrd: " << mrd_status_name(st) << ": " << mrd_last_error() << '\n';
  return exit_code(st);
}

json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

struct ScenarioArgs {
  std::string path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<double> sigma;
};

void add_scenario_options(CLI::App* cmd, ScenarioArgs& a) {
  auto* group = cmd->add_option_group("scenario");
  group->add_option("--scenario", a.path, "Scenario JSON file")->check(CLI::ExistingFile);
  group->add_option("--preset", a.preset, "Built-in scenario")
      ->check(CLI::IsMember({"rhine", "forggensee", "collinear"}));
  group->require_option(1);
  cmd->add_option("--seed", a.seed, "Override the noise seed");
  cmd->add_option("--noise-sigma-tau", a.sigma, "Override timestamp noise [s]")
      ->check(CLI::NonNegativeNumber);
}

class ScenarioHandle {
 public:
  ~ScenarioHandle() { mrd_scenario_free(ptr_); }
  mrd_status open(const ScenarioArgs& a) {
    mrd_status st = a.path.empty() ? mrd_scenario_preset(a.preset.c_str(), &ptr_)
                                   : mrd_scenario_load(a.path.c_str(), &ptr_);
    if (st != MRD_OK) return st;
    log_line("scenario " + (a.path.empty() ? "preset " + a.preset : a.path));
    if (a.seed) st = mrd_scenario_set_seed(ptr_, *a.seed);
    if (st == MRD_OK && a.sigma) st = mrd_scenario_set_noise_sigma_tau(ptr_, *a.sigma);
    return st;
  }
  mrd_scenario* get() const { return ptr_; }

 private:
  mrd_scenario* ptr_ = nullptr;
};

class CostHandle {
 public:
  ~CostHandle() { mrd_cost_params_free(ptr_); }
  mrd_status open(const std::string& path) {
    return path.empty() ? mrd_cost_params_default(&ptr_)
                        : mrd_cost_params_load(path.c_str(), &ptr_);
  }
  mrd_cost_params* get() const { return ptr_; }

 private:
  mrd_cost_params* ptr_ = nullptr;
};

std::string prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  return dir;
}

mrd_metric parse_metric(const std::string& m) {
  return m == "rms" ? MRD_METRIC_RMS : MRD_METRIC_VERBATIM;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("MRD_LOG")) {
    g_verbose = std::string(env) != "" && std::string(env) != "0";
  }

  CLI::App app{"Vessel positioning from radar-sweep timestamps"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "Print a JSON summary on stdout");
  app.set_version_flag("--version", std::string(mrd_version()));

  const std::vector<std::string> metrics{"verbatim", "rms"};

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate sweep timestamps");
  ScenarioArgs sim_sc;
  std::string sim_out = ".";
  add_scenario_options(sim, sim_sc);
  sim->add_option("--out", sim_out, "Output directory");

  // locate
  auto* loc = app.add_subcommand("locate", "Estimate vessel positions");
  ScenarioArgs loc_sc;
  std::string loc_out = ".";
  std::string loc_obs;
  std::string loc_metric = "verbatim";
  int loc_k = 0;
  bool loc_all = false;
  add_scenario_options(loc, loc_sc);
  loc->add_option("--out", loc_out, "Output directory");
  loc->add_option("--observations", loc_obs, "Observation CSV (default: simulate)")
      ->check(CLI::ExistingFile);
  loc->add_option("--metric", loc_metric)->check(CLI::IsMember(metrics));
  loc->add_option("--combinations", loc_k, "Evaluate every size-k sensor subset")
      ->check(CLI::NonNegativeNumber);
  loc->add_flag("--all-pairs", loc_all, "Use every sensor pair");

  // heatmap
  auto* hm = app.add_subcommand("heatmap", "Region-wide error raster");
  ScenarioArgs hm_sc;
  std::string hm_out = ".";
  std::string hm_metric = "verbatim";
  std::string hm_format = "csv";
  mrd_heatmap_options hm_opt;
  mrd_heatmap_options_init(&hm_opt);
  add_scenario_options(hm, hm_sc);
  hm->add_option("--out", hm_out, "Output directory");
  hm->add_option("--cells-x", hm_opt.cells_x)->check(CLI::PositiveNumber);
  hm->add_option("--cells-y", hm_opt.cells_y)->check(CLI::PositiveNumber);
  hm->add_option("--margin", hm_opt.margin)->check(CLI::NonNegativeNumber);
  hm->add_option("--delta-tau", hm_opt.delta_tau, "Timing error [s]")
      ->check(CLI::NonNegativeNumber);
  hm->add_option("--metric", hm_metric)->check(CLI::IsMember(metrics));
  hm->add_option("--format", hm_format)->check(CLI::IsMember({"csv", "pgm"}));
  hm->add_option("--legend", hm_opt.legend_max, "PGM clip value")
      ->check(CLI::PositiveNumber);
  hm->add_option("--threads", hm_opt.threads);

  // optimize
  auto* opt = app.add_subcommand("optimize", "Cheapest sensor subset under a threshold");
  ScenarioArgs opt_sc;
  std::string opt_out = ".";
  std::string opt_params;
  std::string opt_regime = "coastal";
  std::string opt_metric = "verbatim";
  double opt_omega = 0.0;
  std::size_t opt_min = 0;
  std::size_t opt_max = 0;
  bool opt_positions = false;
  add_scenario_options(opt, opt_sc);
  opt->add_option("--out", opt_out, "Output directory");
  opt->add_option("--params", opt_params, "Cost parameter JSON")->check(CLI::ExistingFile);
  auto* omega_opt = opt->add_option("--omega", opt_omega, "Error threshold")
                        ->check(CLI::PositiveNumber);
  opt->add_option("--regime", opt_regime)
      ->check(CLI::IsMember({"coastal", "port", "docked"}))
      ->excludes(omega_opt);
  opt->add_option("--metric", opt_metric)->check(CLI::IsMember(metrics));
  opt->add_option("--min-size", opt_min);
  opt->add_option("--max-size", opt_max);
  opt->add_flag("--positions", opt_positions,
                "Score subsets at ground-truth positions instead of sweeps");

  // cost
  auto* cost = app.add_subcommand("cost", "Expenditure breakdown");
  std::string cost_params;
  std::string cost_out;
  std::string cost_pricing;
  std::optional<double> cost_watts;
  std::optional<double> cost_days;
  std::size_t cost_sensors = 1;
  cost->add_option("--params", cost_params, "Cost parameter JSON")->check(CLI::ExistingFile);
  cost->add_option("--watts", cost_watts)->check(CLI::NonNegativeNumber);
  cost->add_option("--days", cost_days)->check(CLI::NonNegativeNumber);
  cost->add_option("--sensors", cost_sensors);
  cost->add_option("--pricing", cost_pricing)->check(CLI::IsMember({"linear", "tariff"}));
  cost->add_option("--out", cost_out, "Also write cost_report.txt here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  json summary;
  mrd_status st = MRD_OK;

  if (*sim) {
    ScenarioHandle sc;
    if ((st = sc.open(sim_sc)) != MRD_OK) return fail(st);
    const std::string dir = prepare_out(sim_out);
    const std::string obs = dir + "/observations.csv";
    const std::string truth = dir + "/truth.csv";
    mrd_simulate_summary s{};
    if ((st = mrd_simulate(sc.get(), obs.c_str(), truth.c_str(), &s)) != MRD_OK) {
      return fail(st);
    }
    summary = {{"command", "simulate"},
               {"sweeps", s.sweeps},
               {"observations", s.observations},
               {"files", {obs, truth}}};
    if (!as_json) {
      std::cout << "wrote " << s.observations << " observations for " << s.sweeps
                << " sweeps to " << obs << "\n";
    }
  } else if (*loc) {
    ScenarioHandle sc;
    if ((st = sc.open(loc_sc)) != MRD_OK) return fail(st);
    const std::string out = prepare_out(loc_out) + "/estimates.csv";
    mrd_locate_options o{loc_obs.empty() ? nullptr : loc_obs.c_str(),
                         parse_metric(loc_metric), loc_k, loc_all ? 1 : 0};
    mrd_locate_summary s{};
    if ((st = mrd_locate(sc.get(), &o, out.c_str(), &s)) != MRD_OK) return fail(st);
    summary = {{"command", "locate"},
               {"rows", s.rows},
               {"failed_rows", s.failed_rows},
               {"max_error", number(s.max_error)},
               {"max_position_error", number(s.max_position_error)},
               {"files", {out}}};
    if (loc_k > 0) summary["subsets_per_row"] = s.subsets_per_row;
    if (!as_json) {
      std::cout << "located " << (s.rows - s.failed_rows) << " of " << s.rows
                << " sweeps, max error " << s.max_error << ", wrote " << out << "\n";
    }
  } else if (*hm) {
    ScenarioHandle sc;
    if ((st = sc.open(hm_sc)) != MRD_OK) return fail(st);
    hm_opt.metric = parse_metric(hm_metric);
    hm_opt.format = hm_format == "pgm" ? MRD_FORMAT_PGM : MRD_FORMAT_CSV;
    const std::string out = prepare_out(hm_out) + "/heatmap." + hm_format;
    mrd_heatmap_summary s{};
    if ((st = mrd_heatmap(sc.get(), &hm_opt, out.c_str(), &s)) != MRD_OK) {
      return fail(st);
    }
    summary = {{"command", "heatmap"},
               {"cells_x", s.cells_x},
               {"cells_y", s.cells_y},
               {"cell_width", s.cell_width},
               {"cell_height", s.cell_height},
               {"unmeasurable", s.unmeasurable},
               {"below_legend", s.below_legend},
               {"median", s.median},
               {"max", s.max},
               {"files", {out}}};
    if (!as_json) {
      std::cout << s.cells_x << "x" << s.cells_y << " cells, median " << s.median
                << ", " << s.unmeasurable << " unmeasurable, wrote " << out << "\n";
    }
  } else if (*opt) {
    ScenarioHandle sc;
    if ((st = sc.open(opt_sc)) != MRD_OK) return fail(st);
    CostHandle params;
    if ((st = params.open(opt_params)) != MRD_OK) return fail(st);
    const std::string out = prepare_out(opt_out) + "/ranking.csv";
    mrd_optimize_options o{opt_omega, opt_regime.c_str(), parse_metric(opt_metric),
                           opt_min, opt_max, opt_positions ? 1 : 0};
    mrd_optimize_summary s{};
    st = mrd_optimize(sc.get(), params.get(), &o, out.c_str(), &s);
    if (st != MRD_OK && st != MRD_ERR_INFEASIBLE) return fail(st);
    summary = {{"command", "optimize"},
               {"feasible", s.feasible != 0},
               {"search", s.greedy ? "greedy" : "exhaustive"},
               {"omega", s.omega},
               {"evaluated", s.evaluated},
               {"feasible_subsets", s.feasible_count},
               {"best_subset", s.best_subset},
               {"best_expenditure_eur", number(s.best_expenditure)},
               {"best_achievable_error", number(s.best_achievable_error)},
               {"files", {out}}};
    if (!as_json) {
      if (s.feasible) {
        std::cout << "best subset " << s.best_subset << " at " << s.best_expenditure
                  << " EUR (omega " << s.omega << "), wrote " << out << "\n";
      } else {
        std::cout << "infeasible: no subset reaches omega " << s.omega
                  << "; best achievable error " << s.best_achievable_error << "\n";
      }
    }
    if (st == MRD_ERR_INFEASIBLE) {
      if (as_json) std::cout << summary.dump(2) << "\n";
      return exit_code(st);
    }
  } else if (*cost) {
    CostHandle params;
    if ((st = params.open(cost_params)) != MRD_OK) return fail(st);
    if (cost_watts) st = mrd_cost_params_set(params.get(), "power_watts", *cost_watts);
    if (st == MRD_OK && cost_days) {
      st = mrd_cost_params_set(params.get(), "horizon_days", *cost_days);
    }
    if (st == MRD_OK && !cost_pricing.empty()) {
      st = mrd_cost_params_set_pricing(params.get(), cost_pricing.c_str());
    }
    if (st != MRD_OK) return fail(st);
    std::size_t need = 0;
    st = mrd_cost_report(params.get(), cost_sensors, nullptr, 0, &need);
    if (st != MRD_ERR_BUFFER_TOO_SMALL) return fail(st);
    std::string text(need, '\0');
    if ((st = mrd_cost_report(params.get(), cost_sensors, text.data(), text.size(),
                              &need)) != MRD_OK) {
      return fail(st);
    }
    text.resize(need - 1);
    double total = 0.0;
    if ((st = mrd_total_expenditure(cost_sensors, params.get(), &total)) != MRD_OK) {
      return fail(st);
    }
    summary = {{"command", "cost"}, {"sensors", cost_sensors}, {"expenditure_eur", total}};
    if (!cost_out.empty()) {
      const std::string path = prepare_out(cost_out) + "/cost_report.txt";
      std::FILE* f = std::fopen(path.c_str(), "wb");
      if (!f || std::fwrite(text.data(), 1, text.size(), f) != text.size()) {
        if (f) std::fclose(f);
        std::cerr << "mrd: IoError: cannot write '" << path << "'\n";
        return 2;
      }
      std::fclose(f);
      summary["files"] = {path};
    }
    if (!as_json) std::cout << text;
  }

  if (as_json) std::cout << summary.dump(2) << "\n";
  return 0;
}
