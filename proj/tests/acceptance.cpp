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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "mrd/costopt.hpp"
#include "mrd/fusion.hpp"
#include "mrd/geometry.hpp"
#include "mrd/sim.hpp"
#include "mrd/uncertainty.hpp"
#include "mrd/verify.hpp"
#include "process.hpp"
#include "support.hpp"

namespace {

using namespace mrd;
using mrd::testing::Gen;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;  // 0: no runtime bound
  std::function<Outcome()> body;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

RadarConfig radar(double period) {
  RadarConfig cfg;
  cfg.period = period;
  return cfg;
}

Outcome noiseless_closure() {
  Outcome o;
  Gen g(1001);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Scenario sc = mrd::testing::random_scenario(g, g.integer(3, 6));
    sc.sweeps = 5;
    for (const Sweep& s : simulate(sc)) {
      try {
        const PositionEstimate e = estimate_position(sc.sensors, s.observations, sc.radar,
                                                     NoiseModel::ground_truth());
        worst = std::max(worst, distance(e.point, s.truth_position));
      } catch (const Error& e) {
        o.require(false, std::string("locate failed: ") + e.what());
      }
    }
  }
  o.require(worst < 1e-6, "worst position error " + fmt(worst) + " m");
  if (o.pass) o.detail = "worst " + fmt(worst) + " m over 500 sweeps";
  return o;
}

double radius_oracle(double tau, double d, double p) {
  return d / (2.0 * std::fabs(std::sin(kTwoPi * tau / p)));
}

Outcome derivative_fidelity() {
  Outcome o;
  double worst = 0.0;
  for (const auto& q : mrd::testing::timing_grid()) {
    const double h = 1e-6 * q.period;
    const double fd = (radius_oracle(q.tau + h, q.baseline, q.period) -
                       radius_oracle(q.tau - h, q.baseline, q.period)) /
                      (2 * h);
    const double an = radius_rate(q.tau, q.baseline, radar(q.period));
    worst = std::max(worst, std::fabs(an - fd) / std::fabs(fd));
  }
  o.require(worst <= 1e-5, "worst relative deviation " + fmt(worst));
  if (o.pass) o.detail = "worst relative deviation " + fmt(worst) + " over 1000 points";
  return o;
}

Outcome linearization_band() {
  Outcome o;
  double worst = 0.0;
  for (const auto& q : mrd::testing::timing_grid()) {
    for (double f : {-1e-4, -1e-5, 1e-5, 1e-4}) {
      const double dt = f * q.period;
      const double ex = delta_r_exact(q.tau, dt, q.baseline, radar(q.period));
      const double li = delta_r_linear(q.tau, dt, q.baseline, radar(q.period));
      worst = std::max(worst, std::fabs(li - ex) / std::fabs(ex));
    }
  }
  o.require(worst < 0.01, "worst relative gap " + fmt(worst));
  if (o.pass) o.detail = "worst relative gap " + fmt(worst);
  return o;
}

Outcome fusion_algebra() {
  Outcome o;
  const Covariance2 half = fuse_pairwise(Covariance2::identity(), Covariance2::identity());
  o.require(half == (Covariance2{0.5, 0.0, 0.5}), "fuse(I, I) != 0.5 I");

  Gen g(1004);
  for (int i = 0; i < 10000; ++i) {
    const Covariance2 a = g.psd(100.0);
    const Covariance2 b = g.psd(100.0);
    const Covariance2 s{a.sxx + b.sxx, a.sxy + b.sxy, a.syy + b.syy};
    if (s.det() <= 1e-12 * s.trace() * s.trace()) continue;
    const Covariance2 f = fuse_pairwise(a, b);
    const auto ev = mrd::testing::eigenvalues(f);
    const double tol = 1e-9 * std::max(1.0, a.trace());
    o.require(ev[0] >= -tol, "fused matrix not PSD at trial " + std::to_string(i));
    o.require(f.trace() <= a.trace() + tol, "trace grew at trial " + std::to_string(i));
  }

  for (int i = 0; i < 10000; ++i) {
    ConfidenceEllipse e;
    e.semi_minor = g.uniform(0.0, 50.0);
    e.semi_major = g.uniform(0.0, 50.0);
    e.orientation = g.uniform(-kPi / 2, kPi / 2);
    const Covariance2 c = covariance_from_ellipse(e);
    using mrd::testing::Mat2;
    const Mat2 r = mrd::testing::rotation(e.orientation);
    const Mat2 d{{{e.semi_major * e.semi_major, 0.0}, {0.0, e.semi_minor * e.semi_minor}}};
    const Mat2 m = mrd::testing::mul(mrd::testing::mul(r, d), mrd::testing::transpose(r));
    const double scale = std::max(1.0, e.semi_major * e.semi_major + e.semi_minor * e.semi_minor);
    const double dev = std::max({std::fabs(c.sxx - m[0][0]), std::fabs(c.sxy - m[0][1]),
                                 std::fabs(c.syy - m[1][1])}) / scale;
    o.require(dev <= 1e-12, "rotation-form deviation " + fmt(dev));
  }
  return o;
}

Outcome collinear_band() {
  Outcome o;
  const Scenario sc = collinear_preset();
  const RegionGrid grid = build_grid(sc.sensors, 200, 200, 0);
  HeatmapOptions opt;
  opt.delta_tau = 1e-5 * sc.radar.period;
  const Heatmap map = heatmap(sc.sensors, grid, sc.radar, opt);
  std::vector<double> off;
  std::size_t band = 0;
  std::size_t unmeasurable = 0;
  for (const HeatmapCell& c : map.cells) {
    if (std::fabs(c.center.y) < 0.5 * grid.cell_height()) {
      ++band;
      if (!c.error) {
        ++unmeasurable;
      } else {
        o.require(*c.error > 1000.0, "axis cell at x=" + fmt(c.center.x) + " has error " +
                                         fmt(*c.error));
      }
    } else if (c.error) {
      off.push_back(*c.error);
    }
  }
  o.require(band == 200, "axis band has " + std::to_string(band) + " cells");
  o.require(!off.empty(), "no measurable off-axis cell");
  if (!off.empty()) {
    std::nth_element(off.begin(), off.begin() + off.size() / 2, off.end());
    const double median = off[off.size() / 2];
    o.require(std::isfinite(median), "off-axis median not finite");
    if (o.pass) {
      o.detail = std::to_string(unmeasurable) + "/" + std::to_string(band) +
                 " axis cells unmeasurable, off-axis median " + fmt(median);
    }
  }
  return o;
}

Outcome combination_study() {
  Outcome o;
  Scenario sc = rhine_preset();
  sc.trajectories.resize(1);
  sc.sweeps = 20;
  const std::vector<Sweep> sweeps = simulate(sc);
  const auto reports = per_timestep_best_combination(
      sc.sensors, sweeps, sc.radar, NoiseModel::ground_truth(), 3, ErrorMetric::kVerbatim);
  o.require(reports.size() == 20, "expected 20 timesteps");
  for (std::size_t t = 0; t < reports.size(); ++t) {
    const CombinationReport& rep = reports[t];
    o.require(rep.evaluated == 20, "timestep " + std::to_string(t) + " evaluated " +
                                       std::to_string(rep.evaluated));
    double oracle = kInf;
    std::size_t trios = 0;
    const auto& obs = sweeps[t].observations;
    for (std::size_t i = 0; i < obs.size(); ++i) {
      for (std::size_t j = i + 1; j < obs.size(); ++j) {
        for (std::size_t k = j + 1; k < obs.size(); ++k) {
          ++trios;
          std::vector<SweepObservation> pick{obs[i], obs[j], obs[k]};
          try {
            oracle = std::min(oracle, estimate_position(sc.sensors, pick, sc.radar,
                                                        NoiseModel::ground_truth())
                                          .error_scalar);
          } catch (const Error&) {
          }
        }
      }
    }
    o.require(trios == 20, "oracle enumerated " + std::to_string(trios));
    o.require(rep.best.error == oracle, "timestep " + std::to_string(t) + ": best " +
                                            fmt(rep.best.error) + " vs oracle " + fmt(oracle));
  }
  return o;
}

Outcome cost_tables() {
  Outcome o;
  const auto e = energy_table(9.0);
  o.require(e[0].wh == 216.0 && e[1].wh == 1512.0 && e[2].kwh == 6.48, "energy rows");
  const auto t = default_tariff();
  o.require(t[0].total_cents() == 660 && t[1].total_cents() == 1190 &&
                t[2].total_cents() == 2955,
            "tariff totals");
  bool joules_flagged = false;
  bool worst_flagged = false;
  for (const ConsistencyCheck& c : check_reference_tables()) {
    if (c.item == "energy daily J at 9 W") joules_flagged = !c.consistent;
    if (c.item == "data daily worst-case bytes at 4 Mbps") {
      worst_flagged = !c.consistent && c.derived == 43.2e9;
    }
  }
  o.require(joules_flagged, "Joules row not flagged");
  o.require(worst_flagged, "worst-case row not flagged at 43.2 GB/day");
  return o;
}

// Independent exhaustive evaluator: bitmask enumeration with the per-sensor
// cost in closed form and the error taken straight from evaluate_position.
Outcome optimizer_correctness() {
  Outcome o;
  Gen g(1008);
  int feasible_instances = 0;
  for (int inst = 0; inst < 50; ++inst) {
    SensorArray sensors;
    for (int i = 0; i < 6; ++i) sensors.push_back({"N" + std::to_string(i), g.point(0, 1000)});
    std::vector<Vec2> positions;
    for (int i = 0; i < 4; ++i) positions.push_back(g.point(200, 800));
    RadarConfig cfg = radar(g.uniform(1.0, 4.0));
    const double dt = 1e-5 * cfg.period;
    CostParams p;
    p.install_per_sensor = g.uniform(500.0, 5000.0);

    std::map<unsigned, double> err;
    std::vector<double> finite;
    for (unsigned mask = 1; mask < 64; ++mask) {
      if (__builtin_popcount(mask) < 3) continue;
      std::vector<std::size_t> subset;
      for (std::size_t i = 0; i < 6; ++i) {
        if (mask & (1u << i)) subset.push_back(i);
      }
      double worst = 0.0;
      for (const Vec2& v : positions) {
        const auto e = evaluate_position(sensors, subset, v, cfg, dt, ErrorMetric::kRms);
        worst = e ? std::max(worst, *e) : kInf;
        if (!e) break;
      }
      err[mask] = worst;
      if (std::isfinite(worst)) finite.push_back(worst);
    }
    std::sort(finite.begin(), finite.end());
    const double omega =
        finite.empty() ? 1.0 : finite[static_cast<std::size_t>(g.integer(0, static_cast<int>(finite.size()) - 1))] *
                                   g.uniform(0.9, 1.1);

    const double per_sensor =
        p.install_per_sensor + p.power_watts * 24.0 * p.horizon_days / 1000.0 * p.energy_rate +
        p.data_bytes_per_day * p.horizon_days / 1e9 * p.data_rate;
    std::vector<std::pair<unsigned, double>> feasible;
    for (const auto& [mask, e] : err) {
      if (e <= omega) feasible.push_back({mask, per_sensor * __builtin_popcount(mask)});
    }
    auto ids = [&](unsigned mask) {
      std::vector<std::string> out;
      for (std::size_t i = 0; i < 6; ++i) {
        if (mask & (1u << i)) out.push_back(sensors[i].id);
      }
      return out;
    };
    std::sort(feasible.begin(), feasible.end(), [&](const auto& a, const auto& b) {
      const int ka = __builtin_popcount(a.first);
      const int kb = __builtin_popcount(b.first);
      if (ka != kb) return ka < kb;
      return ids(a.first) < ids(b.first);
    });

    const OptimizeResult r = optimize_subset(
        sensors, position_evaluator(sensors, positions, cfg, dt, ErrorMetric::kRms), p,
        {omega, Regime::kCoastal}, 3, 6);
    const std::string tag = "instance " + std::to_string(inst) + ": ";
    o.require(r.feasible == !feasible.empty(), tag + "feasibility verdict differs");
    o.require(r.ranked.size() == feasible.size(), tag + "feasible set size differs");
    for (std::size_t i = 0; i < std::min(r.ranked.size(), feasible.size()); ++i) {
      o.require(r.ranked[i].ids == ids(feasible[i].first), tag + "rank " + std::to_string(i) +
                                                               " differs");
      o.require(std::fabs(r.ranked[i].expenditure - feasible[i].second) <=
                    1e-9 * feasible[i].second,
                tag + "expenditure differs");
    }
    feasible_instances += !feasible.empty();
  }
  if (o.pass) o.detail = std::to_string(feasible_instances) + "/50 instances feasible";
  return o;
}

Outcome threshold_regimes() {
  using mrd::testing::run_cli;
  Outcome o;
  o.require(Threshold::for_regime(regime_from_string("coastal")).omega == 10.0, "coastal");
  o.require(Threshold::for_regime(regime_from_string("port")).omega == 1.0, "port");
  o.require(Threshold::for_regime(regime_from_string("docked")).omega == 0.1, "docked");
  mrd::testing::ScratchDir dir("accept9");
  const auto r = run_cli("optimize --preset rhine --omega 1e-9 --out " + dir.str());
  o.require(r.exit_code == 4, "infeasible optimize exited " + std::to_string(r.exit_code));
  const auto at = r.output.find("best achievable error");
  o.require(at != std::string::npos, "best achievable error not printed");
  if (at != std::string::npos) {
    const double v =
        std::strtod(r.output.c_str() + at + std::string("best achievable error").size(), nullptr);
    o.require(std::isfinite(v) && v > 0.0, "best achievable error not a finite number");
    if (o.pass) o.detail = "exit 4, best achievable error " + fmt(v);
  }
  return o;
}

double median_of(const Heatmap& map) {
  std::vector<double> v;
  for (const HeatmapCell& c : map.cells) v.push_back(c.error.value_or(kInf));
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

Outcome campaign_surrogate() {
  Outcome o;
  auto run = [](const Scenario& sc) {
    HeatmapOptions opt;
    opt.delta_tau = 1e-5 * sc.radar.period;
    opt.metric = ErrorMetric::kRms;
    return heatmap(sc.sensors,
                   build_grid(sc.sensors, sc.grid->cells_x, sc.grid->cells_y, sc.grid->margin),
                   sc.radar, opt);
  };
  const Heatmap rhine = run(rhine_preset());
  std::size_t below = 0;
  for (const HeatmapCell& c : rhine.cells) below += c.error && *c.error < 5.0;
  const double frac = static_cast<double>(below) / static_cast<double>(rhine.cells.size());
  o.require(frac >= 0.5, "Rhine fraction below 5 m is " + fmt(frac));
  const double mr = median_of(rhine);
  const double mf = median_of(run(forggensee_preset()));
  o.require(mf > mr, "Forggensee median " + fmt(mf) + " <= Rhine median " + fmt(mr));
  if (o.pass) {
    o.detail = "Rhine " + fmt(100.0 * frac) + "% below 5 m, medians " + fmt(mr) + " vs " +
               fmt(mf);
  }
  return o;
}

Outcome determinism() {
  using mrd::testing::read_file;
  using mrd::testing::run_cli;
  Outcome o;
  mrd::testing::ScratchDir a("accept11a");
  mrd::testing::ScratchDir b("accept11b");
  const std::vector<std::pair<std::string, std::string>> commands{
      {"simulate --preset rhine", "observations.csv"},
      {"simulate --preset rhine", "truth.csv"},
      {"locate --preset rhine --combinations 3", "estimates.csv"},
      {"heatmap --preset forggensee --cells-x 120 --cells-y 240", "heatmap.csv"},
      {"heatmap --preset rhine --cells-x 50 --cells-y 90 --format pgm", "heatmap.pgm"},
      {"optimize --preset rhine --regime coastal", "ranking.csv"},
      {"cost --watts 9 --days 30 --pricing tariff", "cost_report.txt"},
  };
  for (const auto& [cmd, artifact] : commands) {
    for (const auto* d : {&a, &b}) {
      const auto r = run_cli("--json " + cmd + " --out " + d->str());
      o.require(r.exit_code == 0, "'" + cmd + "' exited " + std::to_string(r.exit_code));
    }
    const std::string x = read_file(a / artifact);
    o.require(!x.empty(), artifact + " is empty");
    o.require(x == read_file(b / artifact), artifact + " differs between runs");
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "noiseless closure, 100 random scenarios", 5.0, noiseless_closure},
      {2, "derivative fidelity against finite differences", 1.0, derivative_fidelity},
      {3, "linearization band", 0.0, linearization_band},
      {4, "fusion algebra", 0.0, fusion_algebra},
      {5, "collinear degeneracy band at 200x200", 10.0, collinear_band},
      {6, "20 size-3 subsets, best equals exhaustive oracle", 0.0, combination_study},
      {7, "energy, tariff and reference-table checks", 0.0, cost_tables},
      {8, "optimizer against brute force, 50 instances", 30.0, optimizer_correctness},
      {9, "threshold regimes and infeasible exit code", 0.0, threshold_regimes},
      {10, "Rhine and Forggensee heatmap contrast", 0.0, campaign_surrogate},
      {11, "byte-identical repeated CLI runs", 0.0, determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.body();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && secs >= c.budget_s) {
      out.require(false, "took " + fmt(secs) + " s, budget " + fmt(c.budget_s) + " s");
    }
    failures += !out.pass;
    std::printf("%s %2d %s (%.2f s)%s%s\n", out.pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                secs, out.detail.empty() ? "" : ": ", out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
