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

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <vector>

#include "mrd/geometry.hpp"
#include "mrd/sim.hpp"
#include "mrd/verify.hpp"
#include "support.hpp"

namespace mrd {
namespace {

double line_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 u = b - a;
  return std::fabs(cross(u, p - a)) / norm(u);
}

// Points where the right-angle circles of two sensor pairs cross. Both
// per-pair ellipses collapse to segments there and the fused error dips to
// nearly zero.
std::vector<Vec2> right_angle_crossings(const SensorArray& s) {
  std::vector<std::pair<Vec2, double>> circles;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      circles.push_back({0.5 * (s[i].position + s[j].position),
                         0.5 * distance(s[i].position, s[j].position)});
    }
  }
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < circles.size(); ++i) {
    for (std::size_t j = i + 1; j < circles.size(); ++j) {
      const auto [c1, r1] = circles[i];
      const auto [c2, r2] = circles[j];
      const double d = distance(c1, c2);
      if (d < 1e-9 || d > r1 + r2 || d < std::fabs(r1 - r2)) continue;
      const double a = (r1 * r1 - r2 * r2 + d * d) / (2 * d);
      const double h = std::sqrt(std::max(0.0, r1 * r1 - a * a));
      const Vec2 u = (1.0 / d) * (c2 - c1);
      const Vec2 m = c1 + a * u;
      out.push_back(m + h * perp(u));
      out.push_back(m - h * perp(u));
    }
  }
  return out;
}

TEST(BuildGrid, RhineCellSize) {
  const Scenario sc = rhine_preset();
  const RegionGrid g = build_grid(sc.sensors, 528, 888, 0);
  EXPECT_NEAR(g.cell_width(), 0.9476, 1e-3 * 0.9476);
  EXPECT_NEAR(g.cell_height(), 1.6901, 1e-3 * 1.6901);
  EXPECT_NEAR(g.cell_area(), 1.6095, 0.01 * 1.6095);
}

TEST(BuildGrid, SingleCellAndMarginInvariance) {
  const SensorArray two{{"A", {0, 0}}, {"B", {10, 10}}};
  const RegionGrid one = build_grid(two, 1, 1, 0);
  EXPECT_EQ(one.cell_count(), 1u);
  EXPECT_EQ(one.min_corner, (Vec2{0, 0}));
  EXPECT_EQ(one.max_corner, (Vec2{10, 10}));

  const Scenario sc = forggensee_preset();
  const RegionGrid g0 = build_grid(sc.sensors, 40, 90, 0);
  for (int m : {1, 7, 250}) {
    const RegionGrid gm = build_grid(sc.sensors, 40, 90, m);
    EXPECT_NEAR(gm.cell_width(), g0.cell_width(), 1e-9 * g0.cell_width());
    EXPECT_NEAR(gm.cell_height(), g0.cell_height(), 1e-9 * g0.cell_height());
    EXPECT_EQ(gm.cells_x, 40 + 2 * m);
    EXPECT_EQ(gm.cells_y, 90 + 2 * m);
  }
}

TEST(BuildGrid, Errors) {
  try {
    build_grid({{"A", {1, 1}}, {"B", {1, 1}}}, 4, 4, 0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateRegion);
  }
  try {
    build_grid({{"A", {1, 1}}}, 4, 4, 0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(EvaluatePosition, SensorCellIsUnmeasurable) {
  const Scenario sc = rhine_preset();
  EXPECT_FALSE(evaluate_position(sc.sensors, sc.sensors[2].position, sc.radar, 1e-5,
                                 ErrorMetric::kVerbatim));
  EXPECT_TRUE(evaluate_position(sc.sensors, Vec2{250, 700}, sc.radar, 1e-5,
                                ErrorMetric::kVerbatim));
}

TEST(Heatmap, ZeroTimingErrorGivesZero) {
  const Scenario sc = rhine_preset();
  const RegionGrid g = build_grid(sc.sensors, 40, 120, 10);
  const Heatmap map = heatmap(sc.sensors, g, sc.radar, HeatmapOptions{});
  const double span = distance(g.min_corner, g.max_corner);
  for (const HeatmapCell& c : map.cells) {
    ASSERT_TRUE(c.error.has_value());
    EXPECT_LE(*c.error, 1e-9 * span * span);
  }
}

TEST(Heatmap, CollinearAxisRow) {
  const Scenario sc = collinear_preset();
  const RegionGrid g = build_grid(sc.sensors, 200, 200, 0);
  HeatmapOptions opt;
  opt.delta_tau = 1e-5 * sc.radar.period;
  const auto t0 = std::chrono::steady_clock::now();
  const Heatmap map = heatmap(sc.sensors, g, sc.radar, opt);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 10.0);

  std::vector<double> off;
  int axis = 0;
  double axis_min = std::numeric_limits<double>::infinity();
  for (const HeatmapCell& c : map.cells) {
    if (std::fabs(c.center.y) < 0.5 * g.cell_height()) {
      if (c.center.x <= 0.0 || c.center.x >= 1000.0) continue;
      ++axis;
      if (c.error) axis_min = std::min(axis_min, *c.error);
      EXPECT_TRUE(!c.error || *c.error > 1000.0) << c.center.x;
    } else if (c.error) {
      off.push_back(*c.error);
    }
  }
  EXPECT_EQ(axis, 200);
  ASSERT_FALSE(off.empty());
  std::nth_element(off.begin(), off.begin() + off.size() / 2, off.end());
  const double median = off[off.size() / 2];
  EXPECT_TRUE(std::isfinite(median));
  EXPECT_GE(axis_min, 1000.0 * median);
}

TEST(Heatmap, ContinuousAwayFromDegeneracies) {
  const Scenario sc = rhine_preset();
  const RegionGrid g =
      build_grid(sc.sensors, sc.grid->cells_x, sc.grid->cells_y, sc.grid->margin);
  HeatmapOptions opt;
  opt.delta_tau = 1e-5 * sc.radar.period;
  const Heatmap map = heatmap(sc.sensors, g, sc.radar, opt);
  const double reach = 10.0 * std::max(g.cell_width(), g.cell_height());
  const std::vector<Vec2> dips = right_angle_crossings(sc.sensors);

  std::vector<char> clear(map.cells.size(), 1);
  for (std::size_t k = 0; k < map.cells.size(); ++k) {
    const Vec2 p = map.cells[k].center;
    for (std::size_t i = 0; i < sc.sensors.size() && clear[k]; ++i) {
      for (std::size_t j = i + 1; j < sc.sensors.size(); ++j) {
        if (line_distance(p, sc.sensors[i].position, sc.sensors[j].position) < reach) {
          clear[k] = 0;
          break;
        }
      }
    }
    for (const Vec2& d : dips) {
      if (clear[k] && distance(p, d) < reach) clear[k] = 0;
    }
  }

  std::size_t checked = 0;
  std::size_t total = 0;
  std::size_t violations = 0;
  for (int r = 0; r < g.cells_y; ++r) {
    for (int c = 0; c < g.cells_x; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * g.cells_x + c;
      for (auto [dc, dr] : {std::pair{1, 0}, std::pair{0, 1}}) {
        if (c + dc >= g.cells_x || r + dr >= g.cells_y) continue;
        ++total;
        const std::size_t j = static_cast<std::size_t>(r + dr) * g.cells_x + c + dc;
        if (!clear[i] || !clear[j] || !map.cells[i].error || !map.cells[j].error) continue;
        ++checked;
        const double a = *map.cells[i].error;
        const double b = *map.cells[j].error;
        if (std::max(a / b, b / a) > 10.0) ++violations;
      }
    }
  }
  EXPECT_EQ(violations, 0u);
  EXPECT_GE(static_cast<double>(checked), 0.5 * static_cast<double>(total));
}

TEST(Heatmap, ErrorGrowsAlongOutwardRays) {
  const Scenario sc = rhine_preset();
  const double dt = 1e-5 * sc.radar.period;
  Vec2 centroid;
  for (const Sensor& s : sc.sensors) centroid = centroid + (1.0 / sc.sensors.size()) * s.position;
  double aperture = 0.0;
  for (const Sensor& a : sc.sensors) {
    for (const Sensor& b : sc.sensors) aperture = std::max(aperture, distance(a.position, b.position));
  }
  const int rays = 64;
  const int steps = 200;
  int monotone = 0;
  for (int k = 0; k < rays; ++k) {
    const double t = kTwoPi * k / rays;
    const Vec2 dir{std::cos(t), std::sin(t)};
    double prev = 0.0;
    bool ok = true;
    for (int i = 0; i <= steps && ok; ++i) {
      const double rr = aperture * (1.0 + static_cast<double>(i) / steps);
      const auto e = evaluate_position(sc.sensors, centroid + rr * dir, sc.radar, dt,
                                       ErrorMetric::kVerbatim);
      if (!e) continue;
      if (*e < prev) ok = false;
      prev = *e;
    }
    monotone += ok;
  }
  EXPECT_GE(monotone, static_cast<int>(std::ceil(0.8 * rays)));
}

TEST(Heatmap, ThreadCountDoesNotChangeOutput) {
  const Scenario sc = forggensee_preset();
  const RegionGrid g = build_grid(sc.sensors, 30, 70, 5);
  HeatmapOptions opt;
  opt.delta_tau = 1e-5;
  opt.threads = 1;
  const Heatmap a = heatmap(sc.sensors, g, sc.radar, opt);
  opt.threads = 5;
  const Heatmap b = heatmap(sc.sensors, g, sc.radar, opt);
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].error, b.cells[i].error);
  }
}

TEST(Export, SingleCellCsv) {
  Heatmap map;
  map.grid = build_grid({{"A", {0, 0}}, {"B", {10, 10}}}, 1, 1, 0);
  map.cells = {{{5, 5}, 0.0}};
  std::ostringstream os;
  export_heatmap_csv(map, os);
  EXPECT_EQ(os.str(), "x,y,error\n5,5,0\n");
}

TEST(Export, PgmClipsAndSaturates) {
  Heatmap map;
  map.grid = build_grid({{"A", {0, 0}}, {"B", {30, 10}}}, 3, 1, 0);
  map.cells = {{{5, 5}, 7.0}, {{15, 5}, 2.5}, {{25, 5}, std::nullopt}};
  std::ostringstream os;
  export_heatmap_pgm(map, 5.0, os);
  const std::string s = os.str();
  const std::string header = "P5\n3 1\n65535\n";
  ASSERT_EQ(s.size(), header.size() + 6);
  EXPECT_EQ(s.substr(0, header.size()), header);
  auto px = [&](int i) {
    return (static_cast<unsigned char>(s[header.size() + 2 * i]) << 8) |
           static_cast<unsigned char>(s[header.size() + 2 * i + 1]);
  };
  EXPECT_EQ(px(0), 65535);
  EXPECT_EQ(px(1), 32768);
  EXPECT_EQ(px(2), 65535);
}

TEST(Export, CsvRoundTripIsBitExact) {
  const Scenario sc = forggensee_preset();
  HeatmapOptions opt;
  opt.delta_tau = 2.4e-5;
  const Heatmap map = heatmap(sc.sensors, build_grid(sc.sensors, 40, 90, 3), sc.radar, opt);
  std::ostringstream os;
  export_heatmap_csv(map, os);
  std::istringstream is(os.str());
  const std::vector<CsvCell> back = read_heatmap_csv(is);
  ASSERT_EQ(back.size(), map.cells.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].x, map.cells[i].center.x);
    EXPECT_EQ(back[i].y, map.cells[i].center.y);
    EXPECT_EQ(back[i].error, map.cells[i].error);
  }
}

TEST(Export, CsvParseErrors) {
  std::istringstream bad_header("a,b\n");
  EXPECT_THROW(read_heatmap_csv(bad_header), Error);
  std::istringstream bad_number("x,y,error\n1,2,zz\n");
  try {
    read_heatmap_csv(bad_number, "map.csv");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

}  // namespace
}  // namespace mrd
