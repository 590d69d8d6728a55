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

// Batch commands behind the `mapnarrate` tool. They write to caller
// supplied streams and return the process exit code so tests can drive
// them in-process:
//   0  success
//   1  dataset could not be loaded
//   2  usage error (bad viewport, unknown script verb, ...)

#pragma once

#include <charconv>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "mapnarrate/session.hpp"

namespace mapnarrate {

inline constexpr int kExitOk = 0;
inline constexpr int kExitLoad = 1;
inline constexpr int kExitUsage = 2;

// "W,S,E,N" in degrees.
inline std::optional<GeoRect> ParseViewport(std::string_view s) {
  double v[4];
  size_t pos = 0;
  for (int i = 0; i < 4; ++i) {
    const size_t end = i < 3 ? s.find(',', pos) : s.size();
    if (end == std::string_view::npos) return std::nullopt;
    const std::string tok = detail::Trim(s.substr(pos, end - pos));
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v[i]);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) return std::nullopt;
    pos = end + 1;
  }
  const GeoRect r{v[0], v[1], v[2], v[3]};
  if (!r.valid()) return std::nullopt;
  return r;
}

// "0,5" -> layer minZooms. Must match the layer count and start at 0.
inline std::optional<std::vector<int>> ParseZoomBands(std::string_view s) {
  std::vector<int> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t end = s.find(',', pos);
    if (end == std::string_view::npos) end = s.size();
    const std::string tok = detail::Trim(s.substr(pos, end - pos));
    int z = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), z);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) return std::nullopt;
    out.push_back(z);
    pos = end + 1;
  }
  return out;
}

inline void ApplyZoomBands(Dataset& ds, const std::vector<int>& bands) {
  if (bands.size() != ds.layers.size()) {
    throw ManifestError("zoom bands list " + std::to_string(bands.size()) + " value(s) for " +
                        std::to_string(ds.layers.size()) + " layer(s)");
  }
  for (size_t i = 0; i < bands.size(); ++i) {
    if ((i == 0 && bands[i] != 0) || (i > 0 && bands[i] <= bands[i - 1])) {
      throw ManifestError("zoom bands must start at 0 and strictly increase");
    }
    ds.layers[i].min_zoom = bands[i];
  }
}

struct DatasetOptions {
  std::string manifest;
  std::string zoom_bands;  // empty: keep the manifest's minZooms
};

// Loads the dataset or writes the failure to `err` and returns null.
inline std::shared_ptr<const Dataset> LoadForCommand(const DatasetOptions& opts, std::ostream& err) {
  try {
    auto load = LoadDataset(opts.manifest);
    if (!opts.zoom_bands.empty()) {
      const auto bands = ParseZoomBands(opts.zoom_bands);
      if (!bands) throw ManifestError("bad zoom bands '" + opts.zoom_bands + "'");
      ApplyZoomBands(load.dataset, *bands);
    }
    return std::make_shared<const Dataset>(std::move(load.dataset));
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return nullptr;
  }
}

struct SummarizeOptions {
  DatasetOptions data;
  std::string viewport;
  int zoom = 0;
  NavConfig nav;
};

inline int RunSummarize(const SummarizeOptions& opts, std::ostream& out, std::ostream& err) {
  const auto rect = ParseViewport(opts.viewport);
  if (!rect) {
    err << "error: --viewport must be W,S,E,N with W<E and S<N, got '" << opts.viewport << "'\n"
        << "usage: mapnarrate summarize --manifest PATH --viewport W,S,E,N --zoom Z"
           " [--low-window literal|symmetric]\n";
    return kExitUsage;
  }
  if (opts.zoom < opts.nav.zoom_min || opts.zoom > opts.nav.zoom_max) {
    err << "error: --zoom must be in [" << opts.nav.zoom_min << ", " << opts.nav.zoom_max << "]\n";
    return kExitUsage;
  }
  const auto dataset = LoadForCommand(opts.data, err);
  if (!dataset) return kExitLoad;
  const Viewport v{*rect, opts.zoom};
  out << RenderSummary(FullViewDescription(*dataset, v, opts.nav)).text() << '\n';
  out << RenderCorners(CornerRegions(v, dataset->LayerForZoom(v.zoom))).text() << '\n';
  return kExitOk;
}

struct ReplayOptions {
  DatasetOptions data;
  std::string script;    // action script, or
  std::string from_log;  // an action log whose actions are replayed
  std::string session;   // session filter for from_log
  std::string log;       // optional: write this run's action log
  NavConfig nav;
};

inline int RunReplay(const ReplayOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.script.empty() == opts.from_log.empty()) {
    err << "error: give exactly one of --script or --from-log\n";
    return kExitUsage;
  }
  std::vector<Action> actions;
  if (!opts.script.empty()) {
    std::ifstream in(opts.script);
    if (!in) {
      err << "error: cannot open script " << opts.script << '\n';
      return kExitUsage;
    }
    try {
      actions = ParseScript(in);
    } catch (const ScriptError& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }
  } else {
    std::ifstream in(opts.from_log);
    if (!in) {
      err << "error: cannot open log " << opts.from_log << '\n';
      return kExitUsage;
    }
    std::vector<ActionRecord> records;
    try {
      records = ReadActionLog(in);
    } catch (const ParseError& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }
    std::string session = opts.session;
    for (const auto& r : records) {
      if (session.empty()) session = r.session_id;
      if (r.session_id != session) {
        if (opts.session.empty()) {
          err << "error: log holds several sessions; pick one with --session\n";
          return kExitUsage;
        }
        continue;
      }
      actions.push_back(r.action);
    }
  }

  const auto dataset = LoadForCommand(opts.data, err);
  if (!dataset) return kExitLoad;

  std::ofstream log_file;
  std::optional<ActionLogWriter> writer;
  if (!opts.log.empty()) {
    log_file.open(opts.log, std::ios::trunc);
    if (!log_file) {
      err << "error: cannot write log " << opts.log << '\n';
      return kExitUsage;
    }
    writer.emplace(log_file);
  }
  Session::RecordSink sink;
  if (writer) sink = [&writer](const ActionRecord& r) { writer->Append(r); };
  for (const auto& line : ReplayTranscript(dataset, actions, opts.nav, sink)) out << line << '\n';
  return kExitOk;
}

}  // namespace mapnarrate
