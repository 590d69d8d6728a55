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

// Dataset loading: GeoJSON FeatureCollections (Polygon / MultiPolygon) and
// the key-value manifest that groups them into zoom-banded layers.
//
// Manifest format, one `key: value` per line, `#` starts a comment:
//
//   title: Population Density
//   label: population density
//   units: people per sq. mile
//   [layer]
//   name: state
//   path: states.geojson
//   valueField: density
//   nameField: NAME
//   minZoom: 0
//
// Each `[layer]` line opens a new layer; relative paths resolve against the
// manifest's directory. An optional `id:` names the dataset, defaulting to
// the manifest file stem.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mapnarrate/geometry.hpp"

namespace mapnarrate {

class ParseError : public Error {
 public:
  using Error::Error;
};

class EmptyLayer : public Error {
 public:
  using Error::Error;
};

class ManifestError : public Error {
 public:
  using Error::Error;
};

struct SkippedFeature {
  size_t index = 0;
  std::string reason;
};

struct LoadReport {
  size_t loaded = 0;
  std::vector<SkippedFeature> skipped;

  std::string ToString() const {
    std::ostringstream os;
    os << "loaded " << loaded << " feature(s), skipped " << skipped.size();
    for (const auto& s : skipped) os << "\n  feature " << s.index << ": " << s.reason;
    return os.str();
  }
};

struct LayerLoad {
  std::vector<GeoFeature> features;
  LoadReport report;
};

struct Layer {
  std::string name;
  int min_zoom = 0;
  std::vector<GeoFeature> features;
};

struct Dataset {
  std::string id;
  std::string title;
  std::string dataset_label;
  std::string units;
  std::vector<Layer> layers;
  GeoRect bbox;

  // Index of the layer whose zoom band holds `zoom`.
  size_t LayerIndexForZoom(int zoom) const {
    size_t idx = 0;
    for (size_t i = 0; i < layers.size(); ++i) {
      if (layers[i].min_zoom <= zoom) idx = i;
    }
    return idx;
  }
  const Layer& LayerForZoom(int zoom) const { return layers[LayerIndexForZoom(zoom)]; }
};

namespace detail {

using nlohmann::json;

inline size_t LineOfOffset(std::string_view text, size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

inline Ring ParseRing(const json& coords) {
  if (!coords.is_array()) throw InvalidGeometry("ring is not an array");
  Ring ring;
  for (const auto& pos : coords) {
    if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
      throw InvalidGeometry("position is not [lon, lat]");
    }
    ring.push_back({pos[0].get<double>(), pos[1].get<double>()});
  }
  if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  CheckRing(ring);
  return ring;
}

inline Polygon ParsePolygon(const json& coords) {
  if (!coords.is_array() || coords.empty()) throw InvalidGeometry("polygon has no rings");
  Polygon poly;
  poly.outer = ParseRing(coords[0]);
  for (size_t i = 1; i < coords.size(); ++i) poly.holes.push_back(ParseRing(coords[i]));
  return poly;
}

inline std::optional<double> NumericValue(const json& v) {
  double d = NAN;
  if (v.is_number()) {
    d = v.get<double>();
  } else if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  } else {
    return std::nullopt;
  }
  if (!std::isfinite(d)) return std::nullopt;
  return d;
}

inline std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

// Parses a FeatureCollection. Features without a usable numeric value or
// with unsupported or invalid geometry are skipped and listed in the report.
inline LayerLoad LoadLayer(std::string_view geojson, const std::string& value_field,
                           const std::string& name_field) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(geojson);
  } catch (const json::parse_error& e) {
    throw ParseError("GeoJSON parse error at line " +
                     std::to_string(detail::LineOfOffset(geojson, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw ParseError("GeoJSON document is not a FeatureCollection");
  }

  LayerLoad out;
  const auto& features = doc["features"];
  for (size_t i = 0; i < features.size(); ++i) {
    const auto& f = features[i];
    const auto skip = [&](std::string reason) { out.report.skipped.push_back({i, std::move(reason)}); };
    if (!f.is_object()) {
      skip("not a feature object");
      continue;
    }
    const json props = f.contains("properties") && f["properties"].is_object() ? f["properties"]
                                                                                : json::object();
    const auto& geom = f.contains("geometry") ? f["geometry"] : json();
    const std::string kind = geom.is_object() ? geom.value("type", "") : "";
    if (kind != "Polygon" && kind != "MultiPolygon") {
      skip("unsupported geometry kind '" + (kind.empty() ? std::string("none") : kind) + "'");
      continue;
    }
    if (!props.contains(value_field)) {
      skip("missing value field '" + value_field + "'");
      continue;
    }
    const auto value = detail::NumericValue(props[value_field]);
    if (!value) {
      skip("non-numeric value in '" + value_field + "'");
      continue;
    }
    std::string id;
    if (f.contains("id")) id = f["id"].is_string() ? f["id"].get<std::string>() : f["id"].dump();
    std::string name;
    if (props.contains(name_field) && props[name_field].is_string()) {
      name = props[name_field].get<std::string>();
    } else {
      name = id.empty() ? "Feature " + std::to_string(i) : id;
    }
    if (id.empty()) id = std::to_string(i);

    try {
      std::vector<Polygon> parts;
      const auto& coords = geom.contains("coordinates") ? geom["coordinates"] : json();
      if (kind == "Polygon") {
        parts.push_back(detail::ParsePolygon(coords));
      } else {
        if (!coords.is_array() || coords.empty()) throw InvalidGeometry("multipolygon is empty");
        for (const auto& p : coords) parts.push_back(detail::ParsePolygon(p));
      }
      out.features.push_back(MakeFeature(std::move(id), std::move(name), std::move(parts), *value));
    } catch (const InvalidGeometry& e) {
      skip(std::string("invalid geometry: ") + e.what());
    }
  }
  out.report.loaded = out.features.size();
  if (out.features.empty()) {
    throw EmptyLayer("layer has no usable features (" + out.report.ToString() + ")");
  }
  return out;
}

// Writes features back as a FeatureCollection that LoadLayer reads
// losslessly (doubles are printed round-trip exact).
inline std::string ToGeoJson(const std::vector<GeoFeature>& features, const std::string& value_field,
                             const std::string& name_field) {
  using detail::json;
  const auto ring_json = [](const Ring& ring) {
    json r = json::array();
    for (const auto& p : ring) r.push_back({p.lon, p.lat});
    r.push_back({ring.front().lon, ring.front().lat});
    return r;
  };
  json fc = {{"type", "FeatureCollection"}, {"features", json::array()}};
  for (const auto& f : features) {
    json polys = json::array();
    for (const auto& part : f.parts) {
      json rings = json::array({ring_json(part.outer)});
      for (const auto& h : part.holes) rings.push_back(ring_json(h));
      polys.push_back(std::move(rings));
    }
    json geometry = f.parts.size() == 1
                        ? json{{"type", "Polygon"}, {"coordinates", polys[0]}}
                        : json{{"type", "MultiPolygon"}, {"coordinates", polys}};
    fc["features"].push_back({{"type", "Feature"},
                              {"id", f.id},
                              {"properties", {{name_field, f.name}, {value_field, f.value}}},
                              {"geometry", std::move(geometry)}});
  }
  return fc.dump();
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct LayerSpec {
  std::string name;
  std::filesystem::path path;
  std::string value_field;
  std::string name_field;
  int min_zoom = 0;
};

struct Manifest {
  std::string id;
  std::string title;
  std::string dataset_label;
  std::string units;
  std::vector<LayerSpec> layers;
};

inline Manifest ParseManifest(std::string_view text, const std::filesystem::path& base_dir = {}) {
  Manifest m;
  std::istringstream in{std::string(text)};
  std::string raw;
  size_t line_no = 0;
  const auto fail = [&](const std::string& msg) {
    throw ManifestError("manifest line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = detail::Trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    if (line == "[layer]") {
      m.layers.emplace_back();
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) fail("expected 'key: value'");
    const std::string key = detail::Trim(std::string_view(line).substr(0, colon));
    const std::string value = detail::Trim(std::string_view(line).substr(colon + 1));
    if (m.layers.empty()) {
      if (key == "id") m.id = value;
      else if (key == "title") m.title = value;
      else if (key == "label") m.dataset_label = value;
      else if (key == "units") m.units = value;
      else fail("unknown dataset key '" + key + "'");
      continue;
    }
    auto& layer = m.layers.back();
    if (key == "name") {
      layer.name = value;
    } else if (key == "path") {
      layer.path = base_dir / value;
    } else if (key == "valueField") {
      layer.value_field = value;
    } else if (key == "nameField") {
      layer.name_field = value;
    } else if (key == "minZoom") {
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), layer.min_zoom);
      if (ec != std::errc() || ptr != value.data() + value.size()) fail("minZoom is not an integer");
    } else {
      fail("unknown layer key '" + key + "'");
    }
  }
  if (m.title.empty()) throw ManifestError("manifest has no title");
  if (m.dataset_label.empty()) m.dataset_label = m.title;
  if (m.layers.empty()) throw ManifestError("manifest declares no layers");
  for (size_t i = 0; i < m.layers.size(); ++i) {
    const auto& l = m.layers[i];
    if (l.name.empty() || l.path.empty() || l.value_field.empty() || l.name_field.empty()) {
      throw ManifestError("layer " + std::to_string(i) +
                          " needs name, path, valueField and nameField");
    }
    if (i == 0 && l.min_zoom != 0) throw ManifestError("first layer must have minZoom 0");
    if (i > 0 && l.min_zoom <= m.layers[i - 1].min_zoom) {
      throw ManifestError("layer minZoom values must be strictly increasing");
    }
  }
  return m;
}

inline Dataset BuildDataset(const Manifest& m, std::vector<Layer> layers) {
  Dataset ds{m.id, m.title, m.dataset_label, m.units, std::move(layers), {}};
  bool first = true;
  for (const auto& layer : ds.layers) {
    for (const auto& f : layer.features) {
      const GeoRect b = BoundingBox(f.parts);
      ds.bbox = first ? b : ds.bbox.united(b);
      first = false;
    }
  }
  if (!ds.bbox.valid()) throw ManifestError("dataset bounding box is degenerate");
  return ds;
}

struct DatasetLoad {
  Dataset dataset;
  std::vector<LoadReport> reports;  // one per layer
};

// Loads a manifest and every layer it lists. Errors from a layer are
// rethrown as ManifestError naming the layer.
inline DatasetLoad LoadDataset(const std::filesystem::path& manifest_path) {
  Manifest m = ParseManifest(ReadFile(manifest_path), manifest_path.parent_path());
  if (m.id.empty()) m.id = manifest_path.stem().string();
  std::vector<Layer> layers;
  std::vector<LoadReport> reports;
  for (const auto& spec : m.layers) {
    try {
      auto load = LoadLayer(ReadFile(spec.path), spec.value_field, spec.name_field);
      layers.push_back({spec.name, spec.min_zoom, std::move(load.features)});
      reports.push_back(std::move(load.report));
    } catch (const ManifestError&) {
      throw;
    } catch (const Error& e) {
      throw ManifestError("layer '" + spec.name + "' (" + spec.path.string() + "): " + e.what());
    }
  }
  return {BuildDataset(m, std::move(layers)), std::move(reports)};
}

}  // namespace mapnarrate
