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

// The exploration session: one viewport over one dataset, driven by
// actions (pan, zoom, info, corners) that each yield an announcement and an
// append-only log record. The CLI replayer and the HTTP service both run on
// this engine.

#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <functional>
#include <istream>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mapnarrate/navigation.hpp"

namespace mapnarrate {

enum class ActionKind { kPan, kZoom, kInfo, kCorners };

struct Action {
  ActionKind kind = ActionKind::kInfo;
  std::optional<Direction> direction;  // kPan only
  std::optional<bool> zoom_in;         // kZoom only

  static Action PanTo(Direction d) { return {ActionKind::kPan, d, std::nullopt}; }
  static Action Zoom(bool in) { return {ActionKind::kZoom, std::nullopt, in}; }
  static Action Info() { return {ActionKind::kInfo, std::nullopt, std::nullopt}; }
  static Action Corners() { return {ActionKind::kCorners, std::nullopt, std::nullopt}; }

  friend bool operator==(const Action&, const Action&) = default;
};

inline std::string_view ActionName(ActionKind k) {
  switch (k) {
    case ActionKind::kPan: return "pan";
    case ActionKind::kZoom: return "zoom";
    case ActionKind::kInfo: return "info";
    case ActionKind::kCorners: return "corners";
  }
  return "";
}

inline std::string ActionArg(const Action& a) {
  if (a.direction) return std::string(ToString(*a.direction));
  if (a.zoom_in) return *a.zoom_in ? "in" : "out";
  return {};
}

// "pan right", "zoom in", "info", "corners".
inline std::string ToScriptLine(const Action& a) {
  std::string arg = ActionArg(a);
  std::string line(ActionName(a.kind));
  if (!arg.empty()) line += " " + arg;
  return line;
}

inline std::optional<Action> MakeAction(std::string_view verb, std::string_view arg) {
  if (verb == "pan") {
    if (auto d = ParseDirection(arg)) return Action::PanTo(*d);
  } else if (verb == "zoom") {
    if (arg == "in" || arg == "out") return Action::Zoom(arg == "in");
  } else if (verb == "info" || verb == "corners") {
    if (arg.empty()) return verb == "info" ? Action::Info() : Action::Corners();
  }
  return std::nullopt;
}

inline std::optional<Action> ParseScriptLine(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::string verb, arg, extra;
  in >> verb >> arg >> extra;
  if (verb.empty() || !extra.empty()) return std::nullopt;
  return MakeAction(verb, arg);
}

class ScriptError : public Error {
 public:
  ScriptError(size_t line, const std::string& text)
      : Error("script line " + std::to_string(line) + ": unknown action '" + text + "'"),
        line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

// Blank lines and lines starting with '#' are ignored.
inline std::vector<Action> ParseScript(std::istream& in) {
  std::vector<Action> out;
  std::string raw;
  size_t n = 0;
  while (std::getline(in, raw)) {
    ++n;
    const std::string line = detail::Trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto a = ParseScriptLine(line);
    if (!a) throw ScriptError(n, line);
    out.push_back(*a);
  }
  return out;
}

using Clock = std::function<std::chrono::system_clock::time_point()>;

inline Clock SystemClock() {
  return [] { return std::chrono::system_clock::now(); };
}

// UTC, millisecond precision: 2026-10-16T09:30:00.125Z
inline std::string Iso8601(std::chrono::system_clock::time_point t) {
  using namespace std::chrono;
  const auto ms = duration_cast<milliseconds>(t.time_since_epoch()).count();
  const std::time_t secs = static_cast<std::time_t>(ms >= 0 ? ms / 1000 : (ms - 999) / 1000);
  const int frac = static_cast<int>(ms - static_cast<long long>(secs) * 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, frac);
  return out;
}

struct ActionRecord {
  std::string timestamp;
  std::string session_id;
  Action action;
  Viewport viewport;  // after the action
};

// One JSON object per line.
inline std::string ToLogLine(const ActionRecord& r) {
  const nlohmann::json j = {
      {"timestamp", r.timestamp},
      {"sessionId", r.session_id},
      {"action", ActionName(r.action.kind)},
      {"arg", ActionArg(r.action)},
      {"rect", {r.viewport.rect.west, r.viewport.rect.south, r.viewport.rect.east, r.viewport.rect.north}},
      {"zoom", r.viewport.zoom}};
  return j.dump();
}

inline ActionRecord ParseLogLine(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    ActionRecord r;
    r.timestamp = j.at("timestamp").get<std::string>();
    r.session_id = j.at("sessionId").get<std::string>();
    const auto a = MakeAction(j.at("action").get<std::string>(), j.at("arg").get<std::string>());
    if (!a) throw ParseError("log record has an unknown action");
    r.action = *a;
    const auto& rect = j.at("rect");
    r.viewport.rect = {rect.at(0).get<double>(), rect.at(1).get<double>(), rect.at(2).get<double>(),
                       rect.at(3).get<double>()};
    r.viewport.zoom = j.at("zoom").get<int>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad log record: ") + e.what());
  }
}

inline std::vector<ActionRecord> ReadActionLog(std::istream& in) {
  std::vector<ActionRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!detail::Trim(line).empty()) out.push_back(ParseLogLine(line));
  }
  return out;
}

// Thread-safe newline-delimited sink shared by many sessions.
class ActionLogWriter {
 public:
  explicit ActionLogWriter(std::ostream& out) : out_(out) {}

  void Append(const ActionRecord& r) {
    std::lock_guard lock(mu_);
    out_ << ToLogLine(r) << '\n';
    out_.flush();
  }

 private:
  std::mutex mu_;
  std::ostream& out_;
};

struct ActionResponse {
  Announcement announcement;
  Viewport viewport;
  std::string layer_name;
  bool out_of_bounds = false;
};

// Not thread-safe; callers serialize actions on one session.
class Session {
 public:
  using RecordSink = std::function<void(const ActionRecord&)>;

  Session(std::string id, std::shared_ptr<const Dataset> dataset, NavConfig cfg = {},
          Clock clock = SystemClock(), RecordSink sink = nullptr)
      : id_(std::move(id)),
        dataset_(std::move(dataset)),
        cfg_(cfg),
        clock_(std::move(clock)),
        sink_(std::move(sink)),
        viewport_(InitialViewport(*dataset_)) {
    viewport_.zoom = std::clamp(0, cfg_.zoom_min, cfg_.zoom_max);
  }

  const std::string& id() const { return id_; }
  const Dataset& dataset() const { return *dataset_; }
  const NavConfig& config() const { return cfg_; }
  const Viewport& viewport() const { return viewport_; }
  const Layer& layer() const { return dataset_->LayerForZoom(viewport_.zoom); }
  const std::vector<ActionRecord>& log() const { return log_; }
  bool out_of_bounds() const { return IsOutOfBounds(viewport_, dataset_->bbox); }

  Announcement Title() const { return RenderTitle(dataset_->title); }
  ViewDescription Describe() const { return FullViewDescription(*dataset_, viewport_, cfg_); }

  ActionResponse Apply(const Action& action) {
    std::optional<Announcement> said;
    switch (action.kind) {
      case ActionKind::kPan: {
        const Direction d = action.direction.value_or(Direction::kRight);
        viewport_ = Pan(viewport_, d, cfg_);
        said = out_of_bounds() ? RenderOutOfBounds() : RenderMove(d, CenterRegion(viewport_, layer()));
        break;
      }
      case ActionKind::kZoom: {
        const bool in = action.zoom_in.value_or(true);
        const ZoomStep step = ZoomStepOf(viewport_, in, *dataset_, cfg_);
        viewport_ = step.viewport;
        said = RenderZoom(in, layer().name, step.at_limit);
        break;
      }
      case ActionKind::kInfo:
        said = RenderSummary(Describe());
        break;
      case ActionKind::kCorners:
        said = RenderCorners(CornerRegions(viewport_, layer()));
        break;
    }
    Record(action);
    return {*said, viewport_, layer().name, out_of_bounds()};
  }

 private:
  void Record(const Action& action) {
    auto now = clock_();
    if (now < last_time_) now = last_time_;
    last_time_ = now;
    ActionRecord r{Iso8601(now), id_, action, viewport_};
    if (sink_) sink_(r);
    log_.push_back(std::move(r));
  }

  std::string id_;
  std::shared_ptr<const Dataset> dataset_;
  NavConfig cfg_;
  Clock clock_;
  RecordSink sink_;
  Viewport viewport_;
  std::vector<ActionRecord> log_;
  std::chrono::system_clock::time_point last_time_{};
};

// Runs actions against a fresh session and returns one line per action.
inline std::vector<std::string> ReplayTranscript(std::shared_ptr<const Dataset> dataset,
                                                 const std::vector<Action>& actions,
                                                 const NavConfig& cfg = {},
                                                 Session::RecordSink sink = nullptr) {
  Session s("replay", std::move(dataset), cfg, SystemClock(), std::move(sink));
  std::vector<std::string> out;
  out.reserve(actions.size());
  for (const auto& a : actions) out.push_back(s.Apply(a).announcement.text());
  return out;
}

}  // namespace mapnarrate
