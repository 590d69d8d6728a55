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

#include "mapnarrate/ingest.hpp"

#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace mapnarrate {
namespace {

const std::string kFixtures = MAPNARRATE_FIXTURES;

constexpr char kTwoSquares[] = R"({
  "type": "FeatureCollection",
  "features": [
    {"type": "Feature", "id": "a", "properties": {"NAME": "Alpha", "v": 1.5},
     "geometry": {"type": "Polygon", "coordinates": [[[0,0],[2,0],[2,2],[0,2],[0,0]]]}},
    {"type": "Feature", "id": 7, "properties": {"NAME": "Beta", "v": "3"},
     "geometry": {"type": "MultiPolygon", "coordinates": [[[[4,0],[5,0],[5,1],[4,1],[4,0]]]]}}
  ]
})";

TEST(LoadLayer, ParsesPolygonsAndMultiPolygons) {
  const auto load = LoadLayer(kTwoSquares, "v", "NAME");
  ASSERT_EQ(load.features.size(), 2u);
  EXPECT_EQ(load.report.loaded, 2u);
  EXPECT_TRUE(load.report.skipped.empty());
  const auto& a = load.features[0];
  EXPECT_EQ(a.id, "a");
  EXPECT_EQ(a.name, "Alpha");
  EXPECT_DOUBLE_EQ(a.value, 1.5);
  EXPECT_EQ(a.centroid, (GeoPoint{1, 1}));
  EXPECT_EQ(a.parts[0].outer.size(), 4u);  // closing vertex dropped
  const auto& b = load.features[1];
  EXPECT_EQ(b.id, "7");
  EXPECT_DOUBLE_EQ(b.value, 3.0);
  EXPECT_EQ(b.centroid, (GeoPoint{4.5, 0.5}));
}

TEST(LoadLayer, SkipsBadValuesAndGeometry) {
  constexpr char kDoc[] = R"({"type": "FeatureCollection", "features": [
    {"type": "Feature", "properties": {"NAME": "ok", "v": 1},
     "geometry": {"type": "Polygon", "coordinates": [[[0,0],[1,0],[1,1],[0,0]]]}},
    {"type": "Feature", "properties": {"NAME": "na", "v": "N/A"},
     "geometry": {"type": "Polygon", "coordinates": [[[0,0],[1,0],[1,1],[0,0]]]}},
    {"type": "Feature", "properties": {"NAME": "pt", "v": 2},
     "geometry": {"type": "Point", "coordinates": [0, 0]}},
    {"type": "Feature", "properties": {"NAME": "missing"},
     "geometry": {"type": "Polygon", "coordinates": [[[0,0],[1,0],[1,1],[0,0]]]}},
    {"type": "Feature", "properties": {"NAME": "line", "v": 3},
     "geometry": {"type": "Polygon", "coordinates": [[[0,0],[1,1],[0,0]]]}}
  ]})";
  const auto load = LoadLayer(kDoc, "v", "NAME");
  ASSERT_EQ(load.features.size(), 1u);
  ASSERT_EQ(load.report.skipped.size(), 4u);
  EXPECT_EQ(load.report.skipped[0].index, 1u);
  EXPECT_NE(load.report.skipped[0].reason.find("non-numeric"), std::string::npos);
  EXPECT_NE(load.report.skipped[1].reason.find("geometry kind 'Point'"), std::string::npos);
  EXPECT_NE(load.report.skipped[2].reason.find("missing value"), std::string::npos);
  EXPECT_NE(load.report.skipped[3].reason.find("invalid geometry"), std::string::npos);
}

TEST(LoadLayer, MalformedDocumentReportsLine) {
  try {
    LoadLayer("{\n\"type\": \"FeatureCollection\",\n\"features\": [,]\n}", "v", "NAME");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(LoadLayer(R"({"type": "Feature"})", "v", "NAME"), ParseError);
}

TEST(LoadLayer, NoUsableFeatures) {
  EXPECT_THROW(LoadLayer(R"({"type": "FeatureCollection", "features": []})", "v", "NAME"), EmptyLayer);
  EXPECT_THROW(LoadLayer(kTwoSquares, "other", "NAME"), EmptyLayer);
}

TEST(LoadLayer, NameFallsBackToId) {
  const auto load = LoadLayer(kTwoSquares, "v", "label");
  EXPECT_EQ(load.features[0].name, "a");
  EXPECT_EQ(load.features[1].name, "7");
}

TEST(LoadLayer, RoundTripPreservesCentroidsAndValues) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1000.0, 1000.0);
  std::vector<GeoFeature> fs;
  for (int i = 0; i < 200; ++i) {
    std::vector<Polygon> parts;
    const int n = 1 + i % 3;
    for (int p = 0; p < n; ++p) {
      Ring ring;
      for (const auto& pt : oracle::RandomConvexPolygon(rng, 0.3 + i * 0.01)) ring.push_back({pt.x, pt.y});
      parts.push_back({ring, {}});
    }
    fs.push_back(MakeFeature("f" + std::to_string(i), "Feature " + std::to_string(i), parts, u(rng)));
  }
  const auto again = LoadLayer(ToGeoJson(fs, "val", "nm"), "val", "nm");
  ASSERT_EQ(again.features.size(), fs.size());
  for (size_t i = 0; i < fs.size(); ++i) {
    EXPECT_EQ(again.features[i].centroid, fs[i].centroid);
    EXPECT_EQ(again.features[i].value, fs[i].value);
    EXPECT_EQ(again.features[i].name, fs[i].name);
  }
}

TEST(ParseManifest, ReadsLayers) {
  const auto m = ParseManifest(R"(# sample
title: Transit Commuters
label: percentage of transit commuters
units: percent
[layer]
name: state
path: s.geojson
valueField: pct
nameField: NAME
minZoom: 0
[layer]
name: county
path: c.geojson
valueField: pct
nameField: NAME
minZoom: 5
)", "/data");
  EXPECT_EQ(m.title, "Transit Commuters");
  EXPECT_EQ(m.dataset_label, "percentage of transit commuters");
  ASSERT_EQ(m.layers.size(), 2u);
  EXPECT_EQ(m.layers[1].min_zoom, 5);
  EXPECT_EQ(m.layers[1].path, std::filesystem::path("/data/c.geojson"));
}

TEST(ParseManifest, Errors) {
  EXPECT_THROW(ParseManifest("label: x\n[layer]\nname: a\npath: p\nvalueField: v\nnameField: n\n"),
               ManifestError);  // no title
  EXPECT_THROW(ParseManifest("title: x\n"), ManifestError);  // no layers
  EXPECT_THROW(ParseManifest("title: x\nbogus\n"), ManifestError);
  EXPECT_THROW(ParseManifest("title: x\ncolor: red\n"), ManifestError);
  EXPECT_THROW(ParseManifest("title: x\n[layer]\nname: a\npath: p\nvalueField: v\nnameField: n\n"
                             "minZoom: 3\n"),
               ManifestError);  // first band must start at 0
  EXPECT_THROW(ParseManifest("title: x\n[layer]\nname: a\npath: p\nvalueField: v\nnameField: n\n"
                             "[layer]\nname: b\npath: p\nvalueField: v\nnameField: n\nminZoom: 0\n"),
               ManifestError);  // not increasing
  EXPECT_THROW(ParseManifest("title: x\n[layer]\nname: a\npath: p\nvalueField: v\nnameField: n\n"
                             "minZoom: five\n"),
               ManifestError);
}

TEST(LoadDataset, CheckerboardFixture) {
  const auto load = LoadDataset(kFixtures + "/checkerboard/manifest.txt");
  const Dataset& ds = load.dataset;
  EXPECT_EQ(ds.id, "checkerboard");
  ASSERT_EQ(ds.layers.size(), 2u);
  EXPECT_EQ(ds.layers[0].features.size(), 9u);
  EXPECT_EQ(ds.layers[1].features.size(), 81u);
  EXPECT_EQ(ds.bbox, (GeoRect{0, 0, 9, 9}));
  EXPECT_EQ(ds.LayerForZoom(1).name, "region");
  EXPECT_EQ(ds.LayerForZoom(2).name, "district");
  for (const auto& layer : ds.layers)
    for (const auto& f : layer.features) EXPECT_TRUE(ds.bbox.contains(f.centroid));
}

TEST(LoadDataset, MissingLayerFileIsManifestError) {
  const auto dir = std::filesystem::temp_directory_path() / "mapnarrate_ingest_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "m.txt") << "title: t\n[layer]\nname: a\npath: nope.geojson\n"
                                    "valueField: v\nnameField: n\n";
  }
  try {
    LoadDataset(dir / "m.txt");
    FAIL() << "expected ManifestError";
  } catch (const ManifestError& e) {
    EXPECT_NE(std::string(e.what()).find("nope.geojson"), std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace mapnarrate
