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

#include "mrd/verify.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "mrd/geometry.hpp"
#include "mrd/sim.hpp"
#include "mrd/uncertainty.hpp"

namespace mrd {

Vec2 RegionGrid::cell_center(int col, int row) const {
  return {min_corner.x + (col + 0.5) * cell_width(),
          max_corner.y - (row + 0.5) * cell_height()};
}

RegionGrid build_grid(const SensorArray& sensors, int cells_x, int cells_y,
                      int margin_cells) {
  if (sensors.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "grid needs at least 2 sensors");
  }
  if (cells_x <= 0 || cells_y <= 0 || margin_cells < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "cells must be positive and margin non-negative");
  }
  Vec2 lo = sensors.front().position;
  Vec2 hi = lo;
  for (const Sensor& s : sensors) {
    lo.x = std::min(lo.x, s.position.x);
    lo.y = std::min(lo.y, s.position.y);
    hi.x = std::max(hi.x, s.position.x);
    hi.y = std::max(hi.y, s.position.y);
  }
  double w = hi.x - lo.x;
  double h = hi.y - lo.y;
  if (w <= kPointTolerance && h <= kPointTolerance) {
    throw Error(ErrorCode::kDegenerateRegion, "all sensors coincide");
  }
  // An axis-aligned line of sensors borrows the other extent, and the line
  // runs through the centers of the middle column or row.
  if (w <= kPointTolerance) {
    const double cx = 0.5 * (lo.x + hi.x);
    const double cw = h / cells_x;
    lo.x = cx - (cells_x / 2 + 0.5) * cw;
    hi.x = lo.x + h;
    w = h;
  } else if (h <= kPointTolerance) {
    const double cy = 0.5 * (lo.y + hi.y);
    const double ch = w / cells_y;
    lo.y = cy - (cells_y / 2 + 0.5) * ch;
    hi.y = lo.y + w;
    h = w;
  }
  const double cw = w / cells_x;
  const double ch = h / cells_y;
  RegionGrid g;
  g.min_corner = {lo.x - margin_cells * cw, lo.y - margin_cells * ch};
  g.max_corner = {hi.x + margin_cells * cw, hi.y + margin_cells * ch};
  g.cells_x = cells_x + 2 * margin_cells;
  g.cells_y = cells_y + 2 * margin_cells;
  g.margin_cells = margin_cells;
  return g;
}

std::optional<double> evaluate_position(const SensorArray& sensors,
                                        const std::vector<std::size_t>& subset,
                                        Vec2 v, const RadarConfig& config,
                                        double delta_tau, ErrorMetric metric) {
  const std::size_t n = subset.size();
  if (n < 3) return std::nullopt;

  struct Ray {
    Vec2 position;
    double bearing;
  };
  std::vector<Ray> rays;
  rays.reserve(n);
  for (std::size_t idx : subset) {
    const Vec2 p = sensors[idx].position;
    if (distance(p, v) <= kPointTolerance) return std::nullopt;
    rays.push_back({p, sweep_bearing(v, p, config)});
  }
  std::stable_sort(rays.begin(), rays.end(),
                   [](const Ray& a, const Ray& b) { return a.bearing < b.bearing; });

  // Every cyclically adjacent pair in sweep order, including the one that
  // wraps past the reference bearing.
  const double period = config.period;
  std::vector<Covariance2> covs;
  covs.reserve(n);
  std::vector<char> valid_pair(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 si = rays[k].position;
    const Vec2 sj = rays[(k + 1) % n].position;
    bool valid = false;
    const double d = distance(si, sj);
    if (d > kPointTolerance) {
      const double alpha = reverse_angle(v, si, sj);
      const double tau = alpha * period / kTwoPi;
      const double shifted = kTwoPi * (tau + delta_tau) / period;
      if (!is_collinear_angle(alpha) && !is_collinear_angle(shifted) &&
          tau + delta_tau > 0.0 && tau + delta_tau < period) {
        const Circle circle = circle_through(si, sj, alpha, side_sense(v, si, sj));
        const double dr = std::fabs(delta_r_exact(tau, delta_tau, d, config));
        if (distance(v, circle.center) > kPointTolerance) {
          covs.push_back(
              covariance_from_ellipse(ellipse_from_pair(circle, dr, v)));
          valid = true;
        }
      }
    }
    valid_pair[k] = valid;
  }
  bool has_fix = false;
  for (std::size_t k = 0; k < n; ++k) {
    if (valid_pair[k] && valid_pair[(k + 1) % n]) has_fix = true;
  }
  if (!has_fix) return std::nullopt;
  const double err = error_metric(fuse_all(covs), metric);
  if (!std::isfinite(err)) return std::nullopt;
  return err;
}

std::optional<double> evaluate_position(const SensorArray& sensors, Vec2 v,
                                        const RadarConfig& config,
                                        double delta_tau, ErrorMetric metric) {
  std::vector<std::size_t> all(sensors.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return evaluate_position(sensors, all, v, config, delta_tau, metric);
}

Heatmap heatmap(const SensorArray& sensors, const RegionGrid& grid,
                const RadarConfig& config, const HeatmapOptions& options) {
  validate_sensors(sensors);
  validate_radar(config);
  if (sensors.size() < 3) {
    throw Error(ErrorCode::kInsufficientObservations,
                "heatmap needs at least 3 sensors");
  }
  Heatmap map;
  map.grid = grid;
  map.cells.resize(grid.cell_count());

  std::vector<std::size_t> all(sensors.size());
  std::iota(all.begin(), all.end(), std::size_t{0});

  auto fill_rows = [&](int row_begin, int row_end) {
    for (int row = row_begin; row < row_end; ++row) {
      for (int col = 0; col < grid.cells_x; ++col) {
        HeatmapCell& cell =
            map.cells[static_cast<std::size_t>(row) * grid.cells_x + col];
        cell.center = grid.cell_center(col, row);
        cell.error = evaluate_position(sensors, all, cell.center, config,
                                       options.delta_tau, options.metric);
      }
    }
  };

  unsigned threads = options.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(grid.cells_y));
  if (threads <= 1) {
    fill_rows(0, grid.cells_y);
    return map;
  }
  std::vector<std::thread> workers;
  const int chunk = (grid.cells_y + static_cast<int>(threads) - 1) /
                    static_cast<int>(threads);
  for (int begin = 0; begin < grid.cells_y; begin += chunk) {
    workers.emplace_back(fill_rows, begin, std::min(grid.cells_y, begin + chunk));
  }
  for (auto& w : workers) w.join();
  return map;
}

void export_heatmap_csv(const Heatmap& map, std::ostream& out) {
  if (map.cells.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty heatmap");
  }
  out << "x,y,error\n";
  for (const HeatmapCell& c : map.cells) {
    out << format_double(c.center.x) << ',' << format_double(c.center.y) << ','
        << (c.error ? format_double(*c.error) : "inf") << '\n';
  }
}

void export_heatmap_pgm(const Heatmap& map, double legend_max, std::ostream& out) {
  if (map.cells.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty heatmap");
  }
  if (!(legend_max > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "legend maximum must be > 0");
  }
  constexpr unsigned kMaxGray = 65535;
  out << "P5\n" << map.grid.cells_x << ' ' << map.grid.cells_y << '\n'
      << kMaxGray << '\n';
  std::string row;
  row.reserve(static_cast<std::size_t>(map.grid.cells_x) * 2);
  for (int r = 0; r < map.grid.cells_y; ++r) {
    row.clear();
    for (int c = 0; c < map.grid.cells_x; ++c) {
      const HeatmapCell& cell = map.at(c, r);
      unsigned gray = kMaxGray;
      if (cell.error) {
        const double f = std::clamp(*cell.error / legend_max, 0.0, 1.0);
        gray = static_cast<unsigned>(std::lround(f * kMaxGray));
      }
      row.push_back(static_cast<char>((gray >> 8) & 0xff));
      row.push_back(static_cast<char>(gray & 0xff));
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

std::vector<CsvCell> read_heatmap_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || line != "x,y,error") {
    throw Error(ErrorCode::kParseError, source + ": line 1: expected 'x,y,error'");
  }
  auto parse = [&](const std::string& text, std::size_t lineno) {
    if (text == "inf") return std::numeric_limits<double>::infinity();
    double value = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
      throw Error(ErrorCode::kParseError, source + ": line " +
                                              std::to_string(lineno) +
                                              ": bad number '" + text + "'");
    }
    return value;
  };
  std::vector<CsvCell> cells;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos ||
        line.find(',', c2 + 1) != std::string::npos) {
      throw Error(ErrorCode::kParseError,
                  source + ": line " + std::to_string(lineno) + ": expected 3 fields");
    }
    CsvCell cell;
    cell.x = parse(line.substr(0, c1), lineno);
    cell.y = parse(line.substr(c1 + 1, c2 - c1 - 1), lineno);
    const std::string e = line.substr(c2 + 1);
    if (e != "inf") cell.error = parse(e, lineno);
    cells.push_back(cell);
  }
  return cells;
}

HeatmapStats heatmap_stats(const Heatmap& map, double legend_max) {
  HeatmapStats st;
  st.cells = map.cells.size();
  std::vector<double> values;
  values.reserve(map.cells.size());
  for (const HeatmapCell& c : map.cells) {
    if (!c.error) {
      ++st.unmeasurable;
      continue;
    }
    values.push_back(*c.error);
    if (*c.error < legend_max) ++st.below_legend;
  }
  if (!values.empty()) {
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
    std::nth_element(values.begin(), mid, values.end());
    st.median = *mid;
    st.max = *std::max_element(values.begin(), values.end());
  }
  return st;
}

}  // namespace mrd
