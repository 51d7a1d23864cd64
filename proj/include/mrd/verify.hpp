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

#ifndef MRD_VERIFY_HPP_
#define MRD_VERIFY_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mrd/fusion.hpp"
#include "mrd/types.hpp"

// Reverse-mode verification: every grid cell is treated as a known vessel
// position, the sweep angles to each sensor pair are recovered with the cosine
// law, and the circle / ellipse / fusion pipeline reports the positioning
// error the sensor layout would achieve there.

namespace mrd {

// Margin-expanded region with cells_x * cells_y equal cells. The sensor
// bounding box occupies the inner (cells_x - 2m) * (cells_y - 2m) block.
struct RegionGrid {
  Vec2 min_corner;
  Vec2 max_corner;
  int cells_x = 0;
  int cells_y = 0;
  int margin_cells = 0;

  double cell_width() const { return (max_corner.x - min_corner.x) / cells_x; }
  double cell_height() const { return (max_corner.y - min_corner.y) / cells_y; }
  double cell_area() const { return cell_width() * cell_height(); }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(cells_x) * static_cast<std::size_t>(cells_y);
  }
  // Row 0 is the northernmost row.
  Vec2 cell_center(int col, int row) const;
};

// Partitions the sensor bounding box into cells_x * cells_y cells and adds
// margin_cells rings of equally sized cells around it.
RegionGrid build_grid(const SensorArray& sensors, int cells_x, int cells_y,
                      int margin_cells);

struct HeatmapCell {
  Vec2 center;
  std::optional<double> error;  // nullopt: unmeasurable

  bool measurable() const { return error.has_value(); }
};

struct Heatmap {
  RegionGrid grid;
  std::vector<HeatmapCell> cells;  // row-major, north to south

  const HeatmapCell& at(int col, int row) const {
    return cells[static_cast<std::size_t>(row) * grid.cells_x + col];
  }
};

struct HeatmapOptions {
  double delta_tau = 0.0;  // seconds, applied to every pair
  ErrorMetric metric = ErrorMetric::kVerbatim;
  unsigned threads = 0;    // 0: hardware concurrency
};

// Error the layout achieves for a vessel at v, or nullopt in the degeneracy
// band. Sensors are taken in sweep order from v and every cyclically adjacent
// pair contributes; two adjacent usable pairs are required.
std::optional<double> evaluate_position(const SensorArray& sensors, Vec2 v,
                                        const RadarConfig& config,
                                        double delta_tau, ErrorMetric metric);

// Restricted to the sensors at `subset` indices.
std::optional<double> evaluate_position(const SensorArray& sensors,
                                        const std::vector<std::size_t>& subset,
                                        Vec2 v, const RadarConfig& config,
                                        double delta_tau, ErrorMetric metric);

Heatmap heatmap(const SensorArray& sensors, const RegionGrid& grid,
                const RadarConfig& config, const HeatmapOptions& options);

// `x,y,error` with `inf` for unmeasurable cells.
void export_heatmap_csv(const Heatmap& map, std::ostream& out);
// Binary P5, 16-bit big-endian, errors clipped at legend_max; unmeasurable
// cells are saturated.
void export_heatmap_pgm(const Heatmap& map, double legend_max, std::ostream& out);

struct CsvCell {
  double x = 0.0;
  double y = 0.0;
  std::optional<double> error;
};
std::vector<CsvCell> read_heatmap_csv(std::istream& in,
                                      const std::string& source = "<stream>");

struct HeatmapStats {
  std::size_t cells = 0;
  std::size_t unmeasurable = 0;
  std::size_t below_legend = 0;
  double median = 0.0;  // over measurable cells
  double max = 0.0;
};
HeatmapStats heatmap_stats(const Heatmap& map, double legend_max);

}  // namespace mrd

#endif  // MRD_VERIFY_HPP_
