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

// HTTP session service.
//
//   GET  /datasets                   -> [{id, title, datasetLabel, units, layers}]
//   POST /sessions {datasetId}       -> {sessionId, announcement, viewport, layerName, outOfBounds}
//   POST /sessions/{id}/actions {action, direction?, zoomDir?} -> ActionResponse
//   GET  /sessions/{id}              -> {sessionId, datasetId, viewport, layerName, outOfBounds, actions}
//
// Errors are {"error": message} with 404 for unknown datasets and sessions
// and 400 for malformed requests (plus "field" naming the offending key).
// Sessions live in memory and expire after an idle period.

#pragma once

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "mapnarrate/session.hpp"

namespace mapnarrate {

class NotFound : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& msg) : Error(msg), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ServiceConfig {
  NavConfig nav;
  std::chrono::seconds idle_ttl{30 * 60};
  std::string static_dir;  // served under /app when set
};

inline nlohmann::json ViewportJson(const Viewport& v) {
  return {{"west", v.rect.west}, {"south", v.rect.south}, {"east", v.rect.east},
          {"north", v.rect.north}, {"zoom", v.zoom}};
}

inline nlohmann::json AnnouncementJson(const Announcement& a) {
  return {{"text", a.text()}, {"kind", ToString(a.kind())}};
}

inline nlohmann::json ResponseJson(const ActionResponse& r) {
  return {{"announcement", AnnouncementJson(r.announcement)},
          {"viewport", ViewportJson(r.viewport)},
          {"layerName", r.layer_name},
          {"outOfBounds", r.out_of_bounds}};
}

// Validates an ActionRequest body: `direction` only with pan, `zoomDir`
// only with zoom.
inline Action ParseActionRequest(const nlohmann::json& body) {
  if (!body.is_object()) throw ValidationError("body", "request body must be a JSON object");
  const auto str_field = [&](const char* key) -> std::optional<std::string> {
    if (!body.contains(key)) return std::nullopt;
    if (!body[key].is_string()) throw ValidationError(key, std::string(key) + " must be a string");
    return body[key].get<std::string>();
  };
  const auto action = str_field("action");
  const auto direction = str_field("direction");
  const auto zoom_dir = str_field("zoomDir");
  if (!action) throw ValidationError("action", "action is required");
  const bool is_pan = *action == "pan", is_zoom = *action == "zoom";
  if (!is_pan && !is_zoom && *action != "info" && *action != "corners") {
    throw ValidationError("action", "unknown action '" + *action + "'");
  }
  if (is_pan != direction.has_value()) {
    throw ValidationError("direction", is_pan ? "direction is required for pan"
                                              : "direction is only allowed for pan");
  }
  if (is_zoom != zoom_dir.has_value()) {
    throw ValidationError("zoomDir", is_zoom ? "zoomDir is required for zoom"
                                             : "zoomDir is only allowed for zoom");
  }
  if (is_pan) {
    const auto d = ParseDirection(*direction);
    if (!d) throw ValidationError("direction", "direction must be left, right, up or down");
    return Action::PanTo(*d);
  }
  if (is_zoom) {
    if (*zoom_dir != "in" && *zoom_dir != "out") {
      throw ValidationError("zoomDir", "zoomDir must be in or out");
    }
    return Action::Zoom(*zoom_dir == "in");
  }
  return *action == "info" ? Action::Info() : Action::Corners();
}

class SessionService {
 public:
  SessionService(std::vector<std::shared_ptr<const Dataset>> datasets, ServiceConfig cfg = {},
                 Clock clock = SystemClock(), ActionLogWriter* log = nullptr)
      : cfg_(std::move(cfg)), clock_(std::move(clock)), log_(log) {
    for (auto& d : datasets) datasets_.emplace(d->id, std::move(d));
  }

  nlohmann::json ListDatasets() const {
    auto out = nlohmann::json::array();
    for (const auto& [id, d] : datasets_) {
      auto layers = nlohmann::json::array();
      for (const auto& l : d->layers) layers.push_back({{"name", l.name}, {"minZoom", l.min_zoom}});
      out.push_back({{"id", id}, {"title", d->title}, {"datasetLabel", d->dataset_label},
                     {"units", d->units}, {"layers", layers}});
    }
    return out;
  }

  nlohmann::json CreateSession(const std::string& dataset_id) {
    const auto it = datasets_.find(dataset_id);
    if (it == datasets_.end()) throw NotFound("dataset not found");
    auto entry = std::make_shared<Entry>(NewId(), it->second, cfg_.nav, clock_, Sink());
    entry->last_access = clock_();
    const Session& s = entry->session;
    nlohmann::json out = {{"sessionId", s.id()},
                          {"announcement", AnnouncementJson(s.Title())},
                          {"viewport", ViewportJson(s.viewport())},
                          {"layerName", s.layer().name},
                          {"outOfBounds", s.out_of_bounds()}};
    std::lock_guard lock(mu_);
    ExpireLocked();
    sessions_.emplace(s.id(), std::move(entry));
    return out;
  }

  // Actions on one session run one at a time, in arrival order at the lock.
  ActionResponse Apply(const std::string& session_id, const Action& action) {
    auto entry = Find(session_id);
    std::lock_guard lock(entry->mu);
    return entry->session.Apply(action);
  }

  nlohmann::json Describe(const std::string& session_id) {
    auto entry = Find(session_id);
    std::lock_guard lock(entry->mu);
    const Session& s = entry->session;
    return {{"sessionId", s.id()},
            {"datasetId", s.dataset().id},
            {"viewport", ViewportJson(s.viewport())},
            {"layerName", s.layer().name},
            {"outOfBounds", s.out_of_bounds()},
            {"actions", s.log().size()}};
  }

  std::vector<ActionRecord> History(const std::string& session_id) {
    auto entry = Find(session_id);
    std::lock_guard lock(entry->mu);
    return entry->session.log();
  }

  size_t session_count() {
    std::lock_guard lock(mu_);
    ExpireLocked();
    return sessions_.size();
  }

  void Mount(httplib::Server& server) {
    using httplib::Request;
    using httplib::Response;
    server.Get("/datasets", [this](const Request&, Response& res) { Reply(res, 200, ListDatasets()); });
    server.Post("/sessions", [this](const Request& req, Response& res) {
      Guard(res, [&] {
        const auto body = ParseBody(req.body);
        if (!body.contains("datasetId") || !body["datasetId"].is_string()) {
          throw ValidationError("datasetId", "datasetId is required");
        }
        Reply(res, 201, CreateSession(body["datasetId"].get<std::string>()));
      });
    });
    server.Post(R"(/sessions/([^/]+)/actions)", [this](const Request& req, Response& res) {
      Guard(res, [&] {
        const std::string id = req.matches[1];
        Find(id);  // unknown session wins over a malformed body
        const Action action = ParseActionRequest(ParseBody(req.body));
        Reply(res, 200, ResponseJson(Apply(id, action)));
      });
    });
    server.Get(R"(/sessions/([^/]+))", [this](const Request& req, Response& res) {
      Guard(res, [&] { Reply(res, 200, Describe(req.matches[1])); });
    });
    if (!cfg_.static_dir.empty()) server.set_mount_point("/app", cfg_.static_dir);
  }

 private:
  struct Entry {
    Entry(std::string id, std::shared_ptr<const Dataset> d, NavConfig nav, Clock clock,
          Session::RecordSink sink)
        : session(std::move(id), std::move(d), nav, std::move(clock), std::move(sink)) {}
    std::mutex mu;
    Session session;
    std::chrono::system_clock::time_point last_access;
  };

  Session::RecordSink Sink() {
    if (!log_) return nullptr;
    return [log = log_](const ActionRecord& r) { log->Append(r); };
  }

  std::string NewId() {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string suffix;
    {
      std::lock_guard lock(rng_mu_);
      for (int i = 0; i < 8; ++i) suffix += kHex[rng_() % 16];
    }
    return "s" + std::to_string(++counter_) + "-" + suffix;
  }

  std::shared_ptr<Entry> Find(const std::string& id) {
    std::lock_guard lock(mu_);
    ExpireLocked();
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw NotFound("session not found");
    it->second->last_access = clock_();
    return it->second;
  }

  void ExpireLocked() {
    const auto now = clock_();
    std::erase_if(sessions_, [&](const auto& kv) { return now - kv.second->last_access > cfg_.idle_ttl; });
  }

  static nlohmann::json ParseBody(const std::string& body) {
    try {
      return nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error&) {
      throw ValidationError("body", "request body is not valid JSON");
    }
  }

  static void Reply(httplib::Response& res, int status, const nlohmann::json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  template <typename F>
  static void Guard(httplib::Response& res, F&& f) {
    try {
      f();
    } catch (const NotFound& e) {
      Reply(res, 404, {{"error", e.what()}});
    } catch (const ValidationError& e) {
      Reply(res, 400, {{"error", e.what()}, {"field", e.field()}});
    }
  }

  ServiceConfig cfg_;
  Clock clock_;
  ActionLogWriter* log_;
  std::map<std::string, std::shared_ptr<const Dataset>> datasets_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::atomic<unsigned> counter_{0};
  std::mutex rng_mu_;
  std::mt19937 rng_{std::random_device{}()};
};

}  // namespace mapnarrate
