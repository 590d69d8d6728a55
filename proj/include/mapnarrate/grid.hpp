/*
 * Copyright 2026 The mapnarrate Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// 3x3 grid abstraction of a rectangle: pick the analysis rectangle, bin
// feature centroids into cells, average per cell and rank the cells.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>

#include "mapnarrate/geometry.hpp"

namespace mapnarrate {

inline constexpr int kGridSide = 3;
inline constexpr int kGridCells = kGridSide * kGridSide;

struct GridCell {
  int count = 0;
  std::optional<double> mean;
  std::optional<int> rank;
};

// Cells are row-major from the top-left: index = 3 * row + col, row 0 is
// the northern row.
struct GridSummary {
  GeoRect rect;
  std::array<GridCell, kGridCells> cells{};
  int non_empty = 0;

  std::array<std::optional<int>, kGridCells> ranks() const {
    std::array<std::optional<int>, kGridCells> out;
    for (int i = 0; i < kGridCells; ++i) out[i] = cells[i].rank;
    return out;
  }
};

// The smaller of the two rectangles by planar area; ties go to the viewport.
inline GeoRect SelectAnalysisRect(const GeoRect& dataset_bbox, const GeoRect& viewport) {
  return dataset_bbox.area() < viewport.area() ? dataset_bbox : viewport;
}

inline std::optional<int> CellIndexOfPoint(const GeoPoint& p, const GeoRect& rect) {
  if (!rect.contains(p)) return std::nullopt;
  const auto bin = [](double offset, double span) {
    const int i = static_cast<int>(std::floor(kGridSide * offset / span));
    return std::clamp(i, 0, kGridSide - 1);
  };
  const int col = bin(p.lon - rect.west, rect.width());
  const int row = bin(rect.north - p.lat, rect.height());
  return kGridSide * row + col;
}

// Ranks the non-empty cells 1..k by descending mean. Equal means give the
// lower cell index the better rank.
inline void RankCells(GridSummary& grid) {
  std::array<int, kGridCells> order;
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& ma = grid.cells[a].mean;
    const auto& mb = grid.cells[b].mean;
    if (ma.has_value() != mb.has_value()) return ma.has_value();
    return ma.has_value() && *ma > *mb;
  });
  grid.non_empty = 0;
  for (int idx : order) {
    auto& cell = grid.cells[idx];
    cell.rank.reset();
    if (cell.mean) cell.rank = ++grid.non_empty;
  }
}

template <typename Features>
GridSummary SummarizeGrid(const Features& features, const GeoRect& rect) {
  GridSummary grid;
  grid.rect = rect;
  std::array<double, kGridCells> sums{};
  for (const GeoFeature& f : features) {
    const auto idx = CellIndexOfPoint(f.centroid, rect);
    if (!idx) continue;
    sums[*idx] += f.value;
    ++grid.cells[*idx].count;
  }
  for (int i = 0; i < kGridCells; ++i) {
    auto& cell = grid.cells[i];
    if (cell.count > 0) cell.mean = sums[i] / cell.count;
  }
  RankCells(grid);
  return grid;
}

}  // namespace mapnarrate
