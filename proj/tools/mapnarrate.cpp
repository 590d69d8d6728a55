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

// mapnarrate: summarize a map view, replay an action script, or serve
// exploration sessions over HTTP.

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "mapnarrate/commands.hpp"
#include "mapnarrate/service.hpp"

namespace {

using namespace mapnarrate;

httplib::Server* g_server = nullptr;

void OnSignal(int) {
  if (g_server) g_server->stop();
}

void AddNavOptions(CLI::App* cmd, NavConfig& nav, std::string& low_window) {
  cmd->add_option("--pan-fraction", nav.pan_fraction, "Pan step as a fraction of the view span")
      ->check(CLI::Range(0.0, 1.0))
      ->envname("MAPNARRATE_PAN_FRACTION");
  cmd->add_option("--low-window", low_window, "Rank window for small low groups")
      ->check(CLI::IsMember({"literal", "symmetric"}))
      ->envname("MAPNARRATE_LOW_WINDOW");
}

int Serve(const std::vector<std::string>& manifests, const std::string& zoom_bands,
          const ServiceConfig& cfg, const std::string& host, int port, const std::string& log_path) {
  std::vector<std::shared_ptr<const Dataset>> datasets;
  for (const auto& m : manifests) {
    auto ds = LoadForCommand({m, zoom_bands}, std::cerr);
    if (!ds) return kExitLoad;
    datasets.push_back(std::move(ds));
  }
  std::ofstream log_file;
  std::optional<ActionLogWriter> writer;
  if (!log_path.empty()) {
    log_file.open(log_path, std::ios::app);
    if (!log_file) {
      std::cerr << "error: cannot open log " << log_path << '\n';
      return kExitUsage;
    }
    writer.emplace(log_file);
  }
  SessionService service(std::move(datasets), cfg, SystemClock(), writer ? &*writer : nullptr);
  httplib::Server server;
  service.Mount(server);
  g_server = &server;
  std::signal(SIGINT, OnSignal);
  std::signal(SIGTERM, OnSignal);
  std::cerr << "listening on " << host << ":" << port << '\n';
  if (!server.listen(host, port)) {
    std::cerr << "error: cannot listen on " << host << ":" << port << '\n';
    return kExitLoad;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Describe choropleth map views in words and explore them by keyboard actions"};
  app.require_subcommand(1);

  std::string low_window = "literal";

  SummarizeOptions summarize;
  auto* sum_cmd = app.add_subcommand("summarize", "Print the summary and corners for one view");
  sum_cmd->add_option("--manifest", summarize.data.manifest, "Dataset manifest")->required();
  sum_cmd->add_option("--viewport", summarize.viewport, "View rect as W,S,E,N")->required();
  sum_cmd->add_option("--zoom", summarize.zoom, "Zoom level")->required();
  sum_cmd->add_option("--zoom-bands", summarize.data.zoom_bands, "Layer minZooms, e.g. 0,5");
  AddNavOptions(sum_cmd, summarize.nav, low_window);

  ReplayOptions replay;
  auto* rep_cmd = app.add_subcommand("replay", "Run an action script and print each announcement");
  rep_cmd->add_option("--manifest", replay.data.manifest, "Dataset manifest")->required();
  rep_cmd->add_option("--script", replay.script, "Action script, one action per line");
  rep_cmd->add_option("--from-log", replay.from_log, "Replay the actions recorded in a log");
  rep_cmd->add_option("--session", replay.session, "Session to replay from --from-log");
  rep_cmd->add_option("--log", replay.log, "Write an action log for this run");
  rep_cmd->add_option("--zoom-bands", replay.data.zoom_bands, "Layer minZooms, e.g. 0,5");
  AddNavOptions(rep_cmd, replay.nav, low_window);

  std::vector<std::string> manifests;
  std::string serve_bands, host = "127.0.0.1", log_path;
  int port = 8080;
  double idle_minutes = 30;
  ServiceConfig serve_cfg;
  auto* srv_cmd = app.add_subcommand("serve", "Run the HTTP session service");
  srv_cmd->add_option("--manifest", manifests, "Dataset manifest (repeatable)")
      ->required()
      ->envname("MAPNARRATE_MANIFEST");
  srv_cmd->add_option("--host", host, "Bind address")->envname("MAPNARRATE_HOST");
  srv_cmd->add_option("--port", port, "Port")->envname("MAPNARRATE_PORT");
  srv_cmd->add_option("--zoom-bands", serve_bands, "Layer minZooms, e.g. 0,5")
      ->envname("MAPNARRATE_ZOOM_BANDS");
  srv_cmd->add_option("--log", log_path, "Append action records to this file")
      ->envname("MAPNARRATE_LOG");
  srv_cmd->add_option("--static-dir", serve_cfg.static_dir, "Directory served under /app");
  srv_cmd->add_option("--idle-minutes", idle_minutes, "Idle session expiry")->check(CLI::PositiveNumber);
  AddNavOptions(srv_cmd, serve_cfg.nav, low_window);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const LowWindowMode mode = *ParseLowWindowMode(low_window);
  if (*sum_cmd) {
    summarize.nav.low_window = mode;
    return RunSummarize(summarize, std::cout, std::cerr);
  }
  if (*rep_cmd) {
    replay.nav.low_window = mode;
    return RunReplay(replay, std::cout, std::cerr);
  }
  serve_cfg.nav.low_window = mode;
  serve_cfg.idle_ttl = std::chrono::seconds(static_cast<long long>(idle_minutes * 60));
  return Serve(manifests, serve_bands, serve_cfg, host, port, log_path);
}
