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

// Planar lon/lat geometry: points, rectangles, polygon features, area
// centroids and point-in-polygon tests. Everything is computed in raw
// degrees (equirectangular plane), which is what a rendered map shows.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mapnarrate {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGeometry : public Error {
 public:
  using Error::Error;
};

struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct GeoRect {
  double west = 0.0;
  double south = 0.0;
  double east = 0.0;
  double north = 0.0;

  double width() const { return east - west; }
  double height() const { return north - south; }
  double area() const { return width() * height(); }
  GeoPoint center() const { return {(west + east) / 2.0, (south + north) / 2.0}; }

  bool valid() const {
    return std::isfinite(west) && std::isfinite(south) && std::isfinite(east) &&
           std::isfinite(north) && west < east && south < north;
  }

  // Closed containment: points on any edge are inside.
  bool contains(const GeoPoint& p) const {
    return p.lon >= west && p.lon <= east && p.lat >= south && p.lat <= north;
  }

  // Touching edges count as intersecting.
  bool intersects(const GeoRect& o) const {
    return !(o.east < west || o.west > east || o.north < south || o.south > north);
  }

  GeoRect united(const GeoRect& o) const {
    return {std::min(west, o.west), std::min(south, o.south), std::max(east, o.east),
            std::max(north, o.north)};
  }

  friend bool operator==(const GeoRect&, const GeoRect&) = default;
};

// A ring is stored open: the closing vertex of a GeoJSON ring is dropped.
using Ring = std::vector<GeoPoint>;

struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
};

struct GeoFeature {
  std::string id;
  std::string name;
  std::vector<Polygon> parts;
  double value = 0.0;
  GeoPoint centroid;
};

namespace detail {

inline void CheckRing(std::span<const GeoPoint> ring) {
  if (ring.size() < 3) throw InvalidGeometry("ring has fewer than 3 vertices");
  std::vector<GeoPoint> distinct;
  for (const auto& p : ring) {
    if (!std::isfinite(p.lon) || !std::isfinite(p.lat)) {
      throw InvalidGeometry("ring has a non-finite coordinate");
    }
    if (std::find(distinct.begin(), distinct.end(), p) == distinct.end()) {
      distinct.push_back(p);
      if (distinct.size() >= 3) return;
    }
  }
  throw InvalidGeometry("ring has fewer than 3 distinct vertices");
}

// Shoelace sums for one ring: signed area and the first moments.
struct RingMoments {
  double area = 0.0;
  double cx = 0.0;
  double cy = 0.0;
};

inline RingMoments Moments(std::span<const GeoPoint> ring) {
  RingMoments m;
  // Shift to the first vertex so large coordinates don't eat precision.
  const GeoPoint o = ring.front();
  for (size_t i = 0; i < ring.size(); ++i) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[(i + 1) % ring.size()];
    const double ax = a.lon - o.lon, ay = a.lat - o.lat;
    const double bx = b.lon - o.lon, by = b.lat - o.lat;
    const double cross = ax * by - bx * ay;
    m.area += cross;
    m.cx += (ax + bx) * cross;
    m.cy += (ay + by) * cross;
  }
  m.area /= 2.0;
  if (m.area != 0.0) {
    m.cx = m.cx / (6.0 * m.area) + o.lon;
    m.cy = m.cy / (6.0 * m.area) + o.lat;
  }
  return m;
}

inline bool OnSegment(const GeoPoint& p, const GeoPoint& a, const GeoPoint& b) {
  const double cross = (b.lon - a.lon) * (p.lat - a.lat) - (b.lat - a.lat) * (p.lon - a.lon);
  const double scale = std::max({std::abs(b.lon - a.lon), std::abs(b.lat - a.lat), 1.0});
  if (std::abs(cross) > 1e-12 * scale * scale) return false;
  return p.lon >= std::min(a.lon, b.lon) && p.lon <= std::max(a.lon, b.lon) &&
         p.lat >= std::min(a.lat, b.lat) && p.lat <= std::max(a.lat, b.lat);
}

inline bool OnRingBoundary(const GeoPoint& p, std::span<const GeoPoint> ring) {
  for (size_t i = 0; i < ring.size(); ++i) {
    if (OnSegment(p, ring[i], ring[(i + 1) % ring.size()])) return true;
  }
  return false;
}

// Even-odd crossing parity of a horizontal ray cast east from p.
inline bool RayParity(const GeoPoint& p, std::span<const GeoPoint> ring) {
  bool inside = false;
  for (size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[j];
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double x = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
      if (p.lon < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace detail

// Area centroid of the outer rings. Multipolygons take the area-weighted
// mean of their part centroids; zero-area geometry falls back to the mean
// of its vertices. Holes are ignored.
inline GeoPoint PolygonCentroid(std::span<const Polygon> parts) {
  if (parts.empty()) throw InvalidGeometry("empty geometry");
  for (const auto& part : parts) detail::CheckRing(part.outer);

  double total = 0.0, sx = 0.0, sy = 0.0;
  for (const auto& part : parts) {
    const auto m = detail::Moments(part.outer);
    const double w = std::abs(m.area);
    if (w == 0.0) continue;
    total += w;
    sx += w * m.cx;
    sy += w * m.cy;
  }
  if (total > 0.0) return {sx / total, sy / total};

  double vx = 0.0, vy = 0.0;
  size_t n = 0;
  for (const auto& part : parts) {
    for (const auto& p : part.outer) {
      vx += p.lon;
      vy += p.lat;
      ++n;
    }
  }
  return {vx / static_cast<double>(n), vy / static_cast<double>(n)};
}

inline GeoPoint PolygonCentroid(const Ring& ring) {
  const Polygon part{ring, {}};
  return PolygonCentroid(std::span<const Polygon>(&part, 1));
}

inline GeoRect BoundingBox(std::span<const Polygon> parts) {
  GeoRect r{INFINITY, INFINITY, -INFINITY, -INFINITY};
  for (const auto& part : parts) {
    for (const auto& p : part.outer) {
      r.west = std::min(r.west, p.lon);
      r.south = std::min(r.south, p.lat);
      r.east = std::max(r.east, p.lon);
      r.north = std::max(r.north, p.lat);
    }
  }
  return r;
}

// Even-odd ray casting per part (outer ring plus holes); a point on any ring
// edge counts as inside.
inline bool PointInPolygon(const GeoPoint& p, std::span<const Polygon> parts) {
  for (const auto& part : parts) {
    if (detail::OnRingBoundary(p, part.outer)) return true;
    bool inside = detail::RayParity(p, part.outer);
    for (const auto& hole : part.holes) {
      if (detail::OnRingBoundary(p, hole)) return true;
      if (detail::RayParity(p, hole)) inside = !inside;
    }
    if (inside) return true;
  }
  return false;
}

inline bool PointInPolygon(const GeoPoint& p, const GeoFeature& feature) {
  return PointInPolygon(p, feature.parts);
}

// Builds a feature and computes its centroid; throws InvalidGeometry.
inline GeoFeature MakeFeature(std::string id, std::string name, std::vector<Polygon> parts,
                              double value) {
  if (!std::isfinite(value)) throw InvalidGeometry("feature value is not finite");
  GeoFeature f{std::move(id), std::move(name), std::move(parts), value, {}};
  f.centroid = PolygonCentroid(f.parts);
  return f;
}

inline Ring RectRing(const GeoRect& r) {
  return {{r.west, r.south}, {r.east, r.south}, {r.east, r.north}, {r.west, r.north}};
}

inline GeoFeature RectFeature(std::string name, const GeoRect& r, double value) {
  std::string id = name;
  return MakeFeature(std::move(id), std::move(name), {Polygon{RectRing(r), {}}}, value);
}

}  // namespace mapnarrate
