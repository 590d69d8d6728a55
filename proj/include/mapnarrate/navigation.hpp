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

// Viewport algebra (pan, zoom) and the per-view queries built on it:
// center and corner lookup, visible statistics and the full description
// handed to the narrator.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "mapnarrate/grid.hpp"
#include "mapnarrate/grouping.hpp"
#include "mapnarrate/ingest.hpp"
#include "mapnarrate/narration.hpp"

namespace mapnarrate {

inline constexpr GeoRect kWorld{-180.0, -90.0, 180.0, 90.0};

struct NavConfig {
  double pan_fraction = 0.25;
  double zoom_factor = 2.0;
  int zoom_min = 0;
  int zoom_max = 8;
  LowWindowMode low_window = LowWindowMode::kLiteral;
};

struct Viewport {
  GeoRect rect;
  int zoom = 0;

  friend bool operator==(const Viewport&, const Viewport&) = default;
};

struct PanStep {
  Viewport viewport;
  bool clamped = false;
};

struct ZoomStep {
  Viewport viewport;
  bool layer_changed = false;
  bool at_limit = false;
};

// Moves the rect by pan_fraction of its span. A move never pushes an edge
// past the world boundary; if the edge is already outside, the rect stays.
inline PanStep PanStepOf(const Viewport& v, Direction d, const NavConfig& cfg = {}) {
  const GeoRect& r = v.rect;
  const bool horizontal = d == Direction::kLeft || d == Direction::kRight;
  const double step = cfg.pan_fraction * (horizontal ? r.width() : r.height());
  const bool forward = d == Direction::kRight || d == Direction::kUp;
  // Edge moving toward the boundary, and how far it may go.
  const double edge = horizontal ? (forward ? r.east : r.west) : (forward ? r.north : r.south);
  const double bound = horizontal ? (forward ? kWorld.east : kWorld.west)
                                  : (forward ? kWorld.north : kWorld.south);
  const double room = forward ? std::max(0.0, bound - edge) : std::max(0.0, edge - bound);
  const bool clamped = step > room;
  const double shift = (clamped ? room : step) * (forward ? 1.0 : -1.0);
  PanStep out{v, clamped};
  if (horizontal) {
    out.viewport.rect.west += shift;
    out.viewport.rect.east += shift;
  } else {
    out.viewport.rect.south += shift;
    out.viewport.rect.north += shift;
  }
  return out;
}

inline Viewport Pan(const Viewport& v, Direction d, const NavConfig& cfg = {}) {
  return PanStepOf(v, d, cfg).viewport;
}

// Scales the rect about its center; a no-op at the zoom limits.
inline ZoomStep ZoomStepOf(const Viewport& v, bool inward, const Dataset& dataset,
                           const NavConfig& cfg = {}) {
  const int target = v.zoom + (inward ? 1 : -1);
  if (target < cfg.zoom_min || target > cfg.zoom_max) return {v, false, true};
  const GeoPoint c = v.rect.center();
  const double scale = inward ? 1.0 / cfg.zoom_factor : cfg.zoom_factor;
  const double half_w = v.rect.width() / 2.0 * scale;
  const double half_h = v.rect.height() / 2.0 * scale;
  Viewport out{{c.lon - half_w, c.lat - half_h, c.lon + half_w, c.lat + half_h}, target};
  const bool changed = dataset.LayerIndexForZoom(v.zoom) != dataset.LayerIndexForZoom(target);
  return {out, changed, false};
}

template <typename Features>
std::optional<std::string> RegionAt(const GeoPoint& p, const Features& features) {
  for (const GeoFeature& f : features) {
    if (PointInPolygon(p, f)) return f.name;
  }
  return std::nullopt;
}

inline std::optional<std::string> CenterRegion(const Viewport& v, const Layer& layer) {
  return RegionAt(v.rect.center(), layer.features);
}

inline CornerNames CornerRegions(const Viewport& v, const Layer& layer) {
  const GeoRect& r = v.rect;
  return {RegionAt(GeoPoint{r.west, r.north}, layer.features),
          RegionAt(GeoPoint{r.east, r.north}, layer.features),
          RegionAt(GeoPoint{r.west, r.south}, layer.features),
          RegionAt(GeoPoint{r.east, r.south}, layer.features)};
}

struct ViewportStats {
  std::optional<NamedValue> high;
  std::optional<NamedValue> low;
  std::optional<double> average;
  int visible_count = 0;

  friend bool operator==(const ViewportStats&, const ViewportStats&) = default;
};

// Statistics over features whose centroid lies in the rect. Ties keep the
// earliest feature in load order.
inline ViewportStats ComputeViewportStats(const Viewport& v, const Layer& layer) {
  ViewportStats s;
  double sum = 0.0;
  for (const auto& f : layer.features) {
    if (!v.rect.contains(f.centroid)) continue;
    ++s.visible_count;
    sum += f.value;
    if (!s.high || f.value > s.high->value) s.high = NamedValue{f.name, f.value};
    if (!s.low || f.value < s.low->value) s.low = NamedValue{f.name, f.value};
  }
  if (s.visible_count > 0) s.average = sum / s.visible_count;
  return s;
}

inline bool IsOutOfBounds(const Viewport& v, const GeoRect& dataset_bbox) {
  return !v.rect.intersects(dataset_bbox);
}

inline ViewDescription FullViewDescription(const Dataset& dataset, const Viewport& v,
                                           const NavConfig& cfg = {}) {
  const Layer& layer = dataset.LayerForZoom(v.zoom);
  const GeoRect analysis = SelectAnalysisRect(dataset.bbox, v.rect);
  const GridSummary grid = SummarizeGrid(layer.features, analysis);
  const ViewportStats stats = ComputeViewportStats(v, layer);

  ViewDescription d;
  d.title = dataset.title;
  d.layer_name = layer.name;
  d.zoom_level = v.zoom;
  d.corners = CornerRegions(v, layer);
  // No visible features means no pattern, even when the analysis rect is
  // the dataset bbox.
  if (grid.non_empty > 0 && stats.visible_count > 0) d.pattern = DetectGroups(grid, cfg.low_window);
  d.extremum_high = stats.high;
  d.extremum_low = stats.low;
  d.average = stats.average;
  d.visible_count = stats.visible_count;
  d.dataset_label = dataset.dataset_label;
  d.units = dataset.units;
  return d;
}

// Initial view: the dataset bbox grown by `pad` of its span on every side.
inline Viewport InitialViewport(const Dataset& dataset, double pad = 0.05) {
  const GeoRect& b = dataset.bbox;
  const double dx = b.width() * pad, dy = b.height() * pad;
  return {{b.west - dx, b.south - dy, b.east + dx, b.north + dy}, 0};
}

}  // namespace mapnarrate
